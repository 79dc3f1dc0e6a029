from django.apps import AppConfig


class RepresentationsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'representations'
    verbose_name = 'Strict binary representations'
