"""Configure Django for pytest, mirroring manage.py's default settings module."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'manifoldconc.settings.development')
django.setup()
