# -*- coding: utf-8 -*-
from ._format import DescriptionConfig, SceneDescription, format_number
from .clock_hour import clock_hour, hour_from_bearing
from .coordinate_description import coordinate_description
from .directional_description import directional_description, situated_description
from .parse_description import parse_description
