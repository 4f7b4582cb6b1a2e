from ._imc2 import *
