"""JSON encodings for fields, series, laws, groups and characters.

Integers are written as decimal strings so that values beyond 2^53 survive
every JSON reader. Residue-ring coordinates use balanced representatives.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .arith import LocalField, LocalRational, NumberFieldRing, RationalRing, ResidueRing, balanced, make_field
from .errors import InputError, MissingCorpus
from .groups import FiniteGroup, load_group
from .hkr import Character, character
from .series import Series


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


# fields ---------------------------------------------------------------------

def field_to_json(F: LocalField) -> dict:
    out = {"p": F.p, "f": F.f, "u_poly": list(F.u_poly), "e": F.e,
           "e_poly": [list(c) for c in F.e_poly] if F.e_poly is not None else None,
           "precision": F.precision}
    if F.name:
        out["name"] = F.name
    return out


def field_from_json(d: dict, precision: int | None = None) -> LocalField:
    try:
        p = int(d["p"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("field JSON needs an integer 'p'") from exc
    unknown = set(d) - {"p", "f", "u_poly", "e", "e_poly", "precision", "name"}
    if unknown:
        raise InputError(f"unknown field keys: {sorted(unknown)}")
    prec = precision if precision is not None else int(d.get("precision", 16))
    return make_field(p, int(d.get("f", 1)), d.get("u_poly"), int(d.get("e", 1)),
                      d.get("e_poly"), prec, name=d.get("name", ""))


# series ---------------------------------------------------------------------

def _frac(c) -> dict:
    c = Fraction(c.value if isinstance(c, LocalRational) else c)
    return {"num": str(c.numerator), "den": str(c.denominator)}


def series_to_json(s: Series) -> dict:
    ring = s.ring
    coeffs = []
    for e in sorted(s.terms):
        c = s.terms[e]
        if ring.mode == "rational":
            coeffs.append({"exp": list(e), **_frac(c)})
        elif ring.mode == "numberfield":
            coeffs.append({"exp": list(e), "coords": [_frac(t) for t in c.coords]})
        else:
            m = ring.field.modulus
            coeffs.append({"exp": list(e), "coords": [str(balanced(t, m)) for t in c.coords]})
    out = {"mode": ring.mode, "truncation": s.trunc, "nvars": s.nvars, "coeffs": coeffs}
    if ring.mode == "residue":
        out["field"] = field_to_json(ring.field)
    elif ring.mode == "numberfield":
        out["p"], out["u_poly"] = ring.p, list(ring.u_poly)
    else:
        out["p"] = ring.p
    return out


def series_from_json(d: dict, field: LocalField | None = None) -> Series:
    mode = d.get("mode", "rational")
    try:
        trunc = int(d["truncation"])
        items = d["coeffs"]
    except KeyError as exc:
        raise InputError(f"series JSON missing {exc}") from exc
    nvars = int(d.get("nvars", len(items[0]["exp"]) if items else 1))
    if mode == "rational":
        ring = RationalRing(int(d.get("p", field.p if field else 0)))
        conv = lambda c: Fraction(int(c["num"]), int(c.get("den", 1)))
    elif mode == "numberfield":
        ring = NumberFieldRing(int(d["p"]), d["u_poly"])
        conv = lambda c: ring.element([Fraction(int(t["num"]), int(t.get("den", 1)))
                                       for t in c["coords"]])
    elif mode == "residue":
        F = field if field is not None else field_from_json(d["field"])
        ring = ResidueRing(F)
        conv = lambda c: F.element([int(t) for t in c["coords"]])
    else:
        raise InputError(f"unknown series mode {mode!r}")
    terms = {}
    for c in items:
        e = tuple(int(x) for x in c["exp"])
        if len(e) != nvars:
            raise InputError(f"exponent {list(e)} has the wrong length")
        terms[e] = conv(c)
    return Series(ring, nvars, trunc, terms)


def law_to_json(F) -> dict:
    prov = dict(F.provenance)
    if F.f_series is not None:
        prov["f_series"] = series_to_json(F.f_series)
    return {"law": series_to_json(F.law), **prov,
            "height": F.height, "precision_achieved": F.precision_achieved}


# groups and characters ------------------------------------------------------

def group_from_file(path) -> FiniteGroup:
    return load_group(read_json(path))


def character_from_json(G: FiniteGroup, d: dict) -> Character:
    try:
        images = [Fraction(int(v["num"]), int(v["den"])) for v in d["generator_images"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError("character JSON needs generator_images of {num, den}") from exc
    return character(G, images)


# bundled corpus -------------------------------------------------------------

def corpus_dir(override=None) -> Path:
    if override is not None:
        path = Path(override)
        if not path.is_dir():
            raise MissingCorpus(f"corpus directory {path} not found")
        return path
    return Path(str(resources.files("fglchar") / "corpus"))


def load_corpus(override=None) -> tuple[dict[str, LocalField], dict[str, FiniteGroup]]:
    """All fields and groups of a corpus directory, keyed by file stem."""
    root = corpus_dir(override)
    fdir, gdir = root / "fields", root / "groups"
    if not fdir.is_dir() or not gdir.is_dir():
        raise MissingCorpus(f"{root} lacks fields/ or groups/")
    fields = {p.stem: field_from_json(read_json(p)) for p in sorted(fdir.glob("*.json"))}
    groups = {p.stem: load_group(read_json(p)) for p in sorted(gdir.glob("*.json"))}
    if not fields or not groups:
        raise MissingCorpus(f"{root} has no fields or no groups")
    return fields, groups
