"""Access to the STAREXPR settings block with library defaults"""
from django.conf import settings

DEFAULTS = {
    'SUBSET_SEARCH_LIMIT': 4096,
    'ELIMINATION_RUN_LIMIT': 64,
    'DEFAULT_SEED': 0,
    'SUITE_CASES': 500,
    'PROOF_CASES': 200,
    'MAX_SIZE': 12,
    'ALPHABET_SIZE': 3,
    'COLLAPSE_STRATEGY': 'canonical',
}


def get_setting(name):
    """Read one STAREXPR value, falling back to DEFAULTS outside a configured project"""
    if settings.configured:
        return getattr(settings, 'STAREXPR', {}).get(name, DEFAULTS[name])
    return DEFAULTS[name]
