"""Parser and realiser for the textual measure-spec language.

    node := sphere(k=INT,n=INT) | cantor(ratio=FLOAT,depth=INT)
          | rcantor(ratio=FLOAT,depth=INT) | uniform(d=INT,n=INT)
          | ball(d=INT,n=INT) | dirac(FLOAT{,FLOAT})
          | brownian(node,d=INT) | product(node,node)
          | translate(node,FLOAT{,FLOAT}) | lift(node) | autocorr(node)

Whitespace is ignored.  Randomised leaves draw their seed from the global
seed and the leaf's position in the tree, so ``product(sphere(...),
sphere(...))`` gets two independent spheres.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import measure as M


class SpecParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# kind -> (keyword parameters with types, number of child nodes, takes a float vector)
_GRAMMAR = {
    "sphere": ({"k": int, "n": int}, 0, False),
    "cantor": ({"ratio": float, "depth": int}, 0, False),
    "rcantor": ({"ratio": float, "depth": int}, 0, False),
    "uniform": ({"d": int, "n": int}, 0, False),
    "ball": ({"d": int, "n": int}, 0, False),
    "dirac": ({}, 0, True),
    "brownian": ({"d": int}, 1, False),
    "product": ({}, 2, False),
    "translate": ({}, 1, True),
    "lift": ({}, 1, False),
    "autocorr": ({}, 1, False),
}

_RANDOM_KINDS = {"sphere", "rcantor", "uniform", "ball", "brownian"}

_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_NAME = re.compile(r"[a-z]+")


@dataclass(frozen=True)
class MeasureSpec:
    kind: str
    params: dict = field(default_factory=dict)
    children: tuple = ()
    vector: tuple = ()

    def __str__(self):
        parts = [str(c) for c in self.children]
        parts += [f"{k}={v!r}" for k, v in self.params.items()]
        parts += [repr(float(v)) for v in self.vector]
        return f"{self.kind}({','.join(parts)})"


class _Parser:
    def __init__(self, text: str):
        # positions refer to the whitespace-free text
        self.src = re.sub(r"\s+", "", text)
        self.i = 0

    def fail(self, msg):
        raise SpecParseError(msg, self.i)

    def expect(self, ch):
        if self.i >= len(self.src) or self.src[self.i] != ch:
            got = self.src[self.i] if self.i < len(self.src) else "end of input"
            self.fail(f"expected {ch!r}, got {got!r}")
        self.i += 1

    def peek(self):
        return self.src[self.i] if self.i < len(self.src) else ""

    def number(self):
        mt = _NUMBER.match(self.src, self.i)
        if not mt:
            self.fail("expected a number")
        self.i = mt.end()
        return mt.group(0)

    def node(self) -> MeasureSpec:
        start = self.i
        mt = _NAME.match(self.src, self.i)
        if not mt:
            self.fail("expected a measure name")
        kind = mt.group(0)
        if kind not in _GRAMMAR:
            self.i = start
            self.fail(f"unknown measure kind {kind!r}")
        self.i = mt.end()
        keywords, n_children, takes_vector = _GRAMMAR[kind]
        self.expect("(")
        children, params, vector = [], {}, []
        for c in range(n_children):
            if c:
                self.expect(",")
            children.append(self.node())
        need_comma = n_children > 0
        for key, typ in keywords.items():
            if need_comma:
                self.expect(",")
            need_comma = True
            name = _NAME.match(self.src, self.i)
            if not name or name.group(0) != key:
                self.fail(f"expected parameter {key!r} for {kind}")
            self.i = name.end()
            self.expect("=")
            raw = self.number()
            if typ is int:
                if not re.fullmatch(r"[+-]?\d+", raw):
                    self.fail(f"parameter {key!r} must be an integer")
                params[key] = int(raw)
            else:
                params[key] = float(raw)
        if takes_vector:
            if need_comma:
                self.expect(",")
            vector.append(float(self.number()))
            while self.peek() == ",":
                self.i += 1
                vector.append(float(self.number()))
        self.expect(")")
        return MeasureSpec(kind, params, tuple(children), tuple(vector))


def parse_measure_spec(text: str) -> MeasureSpec:
    p = _Parser(text)
    spec = p.node()
    if p.i != len(p.src):
        p.fail("trailing characters after measure spec")
    return spec


def _leaf_seed(seed: int, path: tuple) -> int:
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *path])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def realize(spec: MeasureSpec | str, seed: int = 42, max_atoms: int = M.DEFAULT_ATOM_BUDGET, _path=()):
    """Build the DiscreteMeasure described by ``spec``."""
    if isinstance(spec, str):
        spec = parse_measure_spec(spec)
    kind, p = spec.kind, spec.params
    s = _leaf_seed(seed, _path) if kind in _RANDOM_KINDS else None
    kids = [realize(c, seed, max_atoms, _path + (i,)) for i, c in enumerate(spec.children)]
    if kind == "sphere":
        out = M.make_sphere_measure(p["k"], p["n"], s)
    elif kind == "cantor":
        out = M.make_cantor_measure(p["ratio"], p["depth"])
    elif kind == "rcantor":
        out = M.make_random_translate_cantor(p["ratio"], p["depth"], s)
    elif kind == "uniform":
        out = M.make_uniform_cube(p["d"], p["n"], s)
    elif kind == "ball":
        out = M.make_uniform_ball(p["d"], p["n"], seed=s)
    elif kind == "dirac":
        out = M.dirac(spec.vector)
    elif kind == "brownian":
        out = M.brownian_image(kids[0], p["d"], s)
    elif kind == "product":
        out = M.product_measure(kids[0], kids[1], max_atoms)
    elif kind == "translate":
        out = M.translate(kids[0], spec.vector)
    elif kind == "lift":
        out = M.lift(kids[0])
    elif kind == "autocorr":
        out = M.autocorrelation(kids[0], max_atoms)
    else:  # pragma: no cover - parser rejects unknown kinds
        raise M.MeasureError(kind)
    if out.n_atoms > max_atoms:
        raise M.BudgetError(f"{kind} produced {out.n_atoms} atoms (budget {max_atoms})")
    return M.DiscreteMeasure(out.positions, out.weights, iid=out.iid, label=str(spec))
