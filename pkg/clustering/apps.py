# clustering/apps.py
# App configuration for modularity quality functions and the Louvain solver

from django.apps import AppConfig


class ClusteringConfig(AppConfig):
    name = "clustering"
    verbose_name = "Multiobjective Louvain clustering"
