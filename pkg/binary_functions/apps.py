from django.apps import AppConfig


class BinaryFunctionsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'binary_functions'
    verbose_name = 'Binary functions'
