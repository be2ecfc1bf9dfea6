from django.apps import AppConfig


class StateTransferConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'state_transfer'
    verbose_name = 'Protected state transfer'
