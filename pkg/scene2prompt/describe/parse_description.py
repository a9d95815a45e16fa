# -*- coding: utf-8 -*-
from re import compile as re_compile

NUMBER = r"(-?\d+(?:\.\d+)?)"
OBJECT_RE = re_compile(r"<([^<>]+)>(?: at)? \[" + r", ".join([NUMBER] * 3) + r"\]")


def parse_description(text: str) -> list:
    """(label, (x, y, z)) pairs of a CT or CDT text, in order of appearance."""
    return [
        (m.group(1), (float(m.group(2)), float(m.group(3)), float(m.group(4))))
        for m in OBJECT_RE.finditer(text)
    ]
