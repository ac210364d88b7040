from hypothesis import settings

settings.register_profile('charts', database=None, deadline=None, max_examples=40)
settings.load_profile('charts')
