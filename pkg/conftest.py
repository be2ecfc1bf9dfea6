import os

import django

# Same settings bootstrap as manage.py, so pytest can collect the Django test cases
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
django.setup()
