# benchmarks/apps.py
# App configuration for synthetic benchmark generators

from django.apps import AppConfig


class BenchmarksConfig(AppConfig):
    name = "benchmarks"
    verbose_name = "Synthetic multiplex benchmarks"
