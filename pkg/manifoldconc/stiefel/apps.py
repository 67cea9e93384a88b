from django.apps import AppConfig


class StiefelConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'stiefel'
    verbose_name = 'Stiefel Manifold'
