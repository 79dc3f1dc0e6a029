from django.apps import AppConfig


class DimapsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'dimaps'
    verbose_name = 'Alternating dimaps'
