from django.apps import apps
from django.conf import settings
from django.test import SimpleTestCase, override_settings

from charts.conf import DEFAULTS, get_setting


class SettingsTests(SimpleTestCase):
    def test_only_the_library_apps_are_installed(self):
        self.assertEqual(settings.INSTALLED_APPS, ['rest_framework', 'charts'])
        self.assertEqual(apps.get_app_config('charts').verbose_name, 'Star expression charts')

    def test_project_values(self):
        self.assertEqual(get_setting('COLLAPSE_STRATEGY'), settings.STAREXPR['COLLAPSE_STRATEGY'])

    @override_settings(STAREXPR={'MAX_SIZE': 5})
    def test_missing_keys_fall_back_to_defaults(self):
        self.assertEqual(get_setting('MAX_SIZE'), 5)
        self.assertEqual(get_setting('SUBSET_SEARCH_LIMIT'), DEFAULTS['SUBSET_SEARCH_LIMIT'])
