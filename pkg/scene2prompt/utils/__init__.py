# -*- coding: utf-8 -*-
from ._errors import *
from ._types import *
from ._core import *
