#!/usr/bin/env python
"""Entry point for the yangbaxter project: ``python manage.py ybe <subcommand>``."""
import os
import sys


def main():
    """Run the ybe command, the test suite or any other Django command."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the packages from requirements.txt "
            "into the active environment first."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
