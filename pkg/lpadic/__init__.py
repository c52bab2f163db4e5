"""
p-adic L-functions: p-adic numbers, measures and their Iwasawa series, modular symbols and the
measures of modular forms, Newton and Hodge polygons.
"""

__version__ = "0.1.0"
