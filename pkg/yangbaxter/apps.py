from django.apps import AppConfig


class YangBaxterConfig(AppConfig):
    name = "yangbaxter"
    verbose_name = "Yang-Baxter Solutions"
