from django.apps import AppConfig


class GrassmannConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'grassmann'
    verbose_name = 'Grassmann Manifold'
