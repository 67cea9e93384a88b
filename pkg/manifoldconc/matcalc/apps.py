from django.apps import AppConfig


class MatcalcConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'matcalc'
    verbose_name = 'Matrix Calculus'
