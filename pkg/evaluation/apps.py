# evaluation/apps.py
# App configuration for metrics and the experiment harness

from django.apps import AppConfig


class EvaluationConfig(AppConfig):
    name = "evaluation"
    verbose_name = "Evaluation and experiments"
