"""In-process entry point for the starexpr management command"""
from django.core.management import execute_from_command_line


def run(argv):
    """Run `starexpr <argv...>` and return its exit code"""
    try:
        execute_from_command_line(['starexpr', 'starexpr', *argv])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0
