"""Bundled example groups with known discrete faithful representations."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .algnum import AlgebraicNumber, field_from_json
from .geom import MatrixSL2
from .repfind import Presentation, Representation
from .wordproblem import parse_word

FIXTURES = {"seifert_weber": "seifert_weber.json"}


@lru_cache(maxsize=None)
def _load(name: str):
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    text = resources.files("hypdecide.data").joinpath(FIXTURES[name]).read_text()
    doc = json.loads(text)
    F = field_from_json(doc["field"])
    gens = doc["gens"]
    pres = Presentation(gens, [parse_word(r, gens) for r in doc["relators"]])
    imgs = []
    for g in gens:
        entries = [AlgebraicNumber.in_field(F.poly, F.index, c) for c in doc["matrices"][g]]
        imgs.append(MatrixSL2(*entries))
    return pres, Representation(imgs)


def load_fixture(name: str):
    """(Presentation, Representation) for a bundled fixture."""
    pres, rep = _load(name)
    return Presentation(list(pres.gens), list(pres.relators)), Representation(list(rep.images))
