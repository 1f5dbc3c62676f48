"""Built-in registry of worked example maps and homotopy families.

Catalog ids are stable strings used by the command-line interface and the
test suite.  Maps: ex2.1.f, ex2.1.g, ex2.1.h, whitney.W, faran.f, faran.g,
faran.h, faran.phi, ex4.1.map.  Families: ex2.1.family, ex4.2.family (the
same quartic/cubic family viewed through its homogenization matrices),
faran.fg.family, faran.gh.family, faran.hphi.family.  Parameterized builders
construct Blaschke products and Whitney terms from user data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ballmaps import RationalBallMap
from .constructors import (BallAutomorphism, BlaschkeProduct, WhitneyTerm,
                           blaschke_map, subspace_basis, whitney_extend,
                           whitney_start)
from .homotopy import (HomotopyFamily, blaschke_homotopy, degree_drop_family,
                       faran_families, faran_maps)
from .polyalg import Polynomial


def whitney_map() -> RationalBallMap:
    """The classical degree-two map from B_3 to B_5."""
    z1 = Polynomial.variable(3, 0)
    z2 = Polynomial.variable(3, 1)
    z3 = Polynomial.variable(3, 2)
    return RationalBallMap(3, 5, [z1, z2, z1 * z3, z2 * z3, z3 * z3])


def group_invariant_degree5_map() -> RationalBallMap:
    """The degree-five group-invariant map from B_2 to B_4."""
    z1 = Polynomial.variable(2, 0)
    z2 = Polynomial.variable(2, 1)
    r5 = math.sqrt(5.0)
    return RationalBallMap(2, 4, [z1 ** 5, (z1 ** 3) * z2 * r5,
                                  z1 * (z2 ** 2) * r5, z2 ** 5])


def quadric_three_map() -> RationalBallMap:
    """The degree-two map (z, zw, w^2) from B_2 to B_3."""
    z = Polynomial.variable(2, 0)
    w = Polynomial.variable(2, 1)
    return RationalBallMap(2, 3, [z, z * w, w * w])


def build_whitney_term(script: dict) -> WhitneyTerm:
    """Build a Whitney term from a plain-data script.

    Expected shape::

        {"domain_dim": n,
         "start": {"a": [[re, im], ...], "unitary": [[[re, im], ...], ...]?},
         "steps": [{"subspace": [indices] | [[re, im] vectors...],
                    "phi": {"a": ..., "unitary": ...}?,
                    "injection": [[[re, im], ...], ...]?}, ...]}

    Complex scalars are written as [re, im] pairs; "unitary", "phi" and
    "injection" are optional.
    """
    n = script.get("domain_dim")
    if not isinstance(n, int) or n < 1:
        raise ValueError("script needs a positive integer domain_dim")
    term = whitney_start(_parse_automorphism(script.get("start"), n))
    for k, raw in enumerate(script.get("steps", [])):
        if "subspace" not in raw:
            raise ValueError(f"step {k} is missing its subspace")
        basis = _parse_subspace(raw["subspace"], term.map.N)
        phi = _parse_automorphism(raw["phi"], n) if raw.get("phi") else None
        injection = _parse_matrix(raw["injection"]) if raw.get("injection") else None
        term = whitney_extend(term, basis, phi, injection)
    return term


def _parse_complex(value):
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"cannot read complex number from {value!r}")


def _parse_vector(values) -> np.ndarray:
    return np.array([_parse_complex(v) for v in values], dtype=complex)


def _parse_matrix(rows) -> np.ndarray:
    return np.array([[_parse_complex(v) for v in row] for row in rows], dtype=complex)


def _parse_automorphism(raw, n: int) -> BallAutomorphism:
    if raw is None:
        return BallAutomorphism.identity(n)
    center = _parse_vector(raw.get("a", [0.0] * n))
    unitary = _parse_matrix(raw["unitary"]) if raw.get("unitary") else None
    return BallAutomorphism(center, unitary)


def _parse_subspace(raw, target_dim: int) -> np.ndarray:
    if all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
        return subspace_basis(target_dim, np.array(raw, dtype=int))
    return np.column_stack([_parse_vector(v) for v in raw])


@dataclass(frozen=True)
class Corpus:
    """Named registry of built-in maps, families, and parameterized builders."""

    maps: dict
    families: dict
    builders: dict

    def entries(self) -> list:
        out = []
        for name in sorted(self.maps):
            m = self.maps[name]
            out.append((name, "map", f"B{m.n} -> B{m.N}, degree {m.degree}"))
        for name in sorted(self.families):
            fam = self.families[name]
            out.append((name, "family",
                        f"B{fam.domain_dim} -> B{fam.target_dim}"))
        for name in sorted(self.builders):
            doc = (self.builders[name].__doc__ or "").strip()
            out.append((name, "builder", doc.splitlines()[0] if doc else ""))
        return out

    def get_map(self, name: str) -> RationalBallMap:
        if name not in self.maps:
            raise KeyError(f"unknown corpus map {name!r}")
        return self.maps[name]

    def get_family(self, name: str) -> HomotopyFamily:
        if name not in self.families:
            raise KeyError(f"unknown corpus family {name!r}")
        return self.families[name]


def _blaschke_builder(theta: float, zeros) -> RationalBallMap:
    """blaschke(theta, zeros): finite Blaschke product as a disk self-map."""
    return blaschke_map(BlaschkeProduct(theta, zeros))


def corpus() -> Corpus:
    """Assemble the registry of built-in example maps and families."""
    quartic = degree_drop_family()
    faran = faran_maps()
    faran_fams = faran_families()
    maps = {
        "ex2.1.f": quartic.endpoint_right,
        "ex2.1.g": quartic.endpoint_left,
        "ex2.1.h": quadric_three_map(),
        "whitney.W": whitney_map(),
        "faran.f": faran["f"],
        "faran.g": faran["g"],
        "faran.h": faran["h"],
        "faran.phi": faran["phi"],
        "ex4.1.map": group_invariant_degree5_map(),
    }
    families = {
        "ex2.1.family": quartic,
        "ex4.2.family": quartic,
        "faran.fg.family": faran_fams["fg"],
        "faran.gh.family": faran_fams["gh"],
        "faran.hphi.family": faran_fams["hphi"],
    }
    builders = {
        "blaschke": _blaschke_builder,
        "whitney": build_whitney_term,
        "blaschke.homotopy": blaschke_homotopy,
    }
    return Corpus(maps, families, builders)
