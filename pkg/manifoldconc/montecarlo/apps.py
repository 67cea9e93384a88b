from django.apps import AppConfig


class MontecarloConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'montecarlo'
    verbose_name = 'Monte Carlo Verification'
