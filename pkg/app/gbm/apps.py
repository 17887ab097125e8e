from django.apps import AppConfig


class GbmConfig(AppConfig):
    name = 'gbm'
    verbose_name = 'Gradient-boosted fraud model'
