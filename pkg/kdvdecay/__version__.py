__title__ = 'kdvdecay'
__description__ = 'Pseudospectral gKdV simulator with weighted-norm diagnostics for fractional-exponential decay.'
__url__ = 'https://github.com/a-maliarov/kdvdecay'
__version__ = '0.3.0'
__author__ = 'Anatolii Maliarov'
__author_email__ = 'tly.mov@gmail.com'
__license__ = 'MIT'
__copyright__ = 'Copyright 2022 Anatolii Maliarov'
