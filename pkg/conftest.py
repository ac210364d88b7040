# Test collection wiring: configure the Django project for pytest.
import os
import sys
from pathlib import Path

import django

sys.path.insert(0, str(Path(__file__).resolve().parent / "starproof"))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "starproof.settings")
django.setup()
