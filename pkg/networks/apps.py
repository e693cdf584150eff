# networks/apps.py
# App configuration for the multiplex graph data model

from django.apps import AppConfig


class NetworksConfig(AppConfig):
    name = "networks"
    verbose_name = "Multiplex networks"
