"""The conjugation action on cones, seen through ball fingerprints.

A fingerprint is a cone's sign pattern on the ball ``B_r`` (identity
omitted). Orbits are explored by conjugating with generators and comparing
fingerprints, so every orbit size reported here is a size *at radius r*:
distinct cones that agree on the ball are merged.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import product

from .cones import Cone, TararinCone, conjugate_cone
from .groups import Group, Tararin, ball_of
from .sets import SetDescriptor, shift_action  # noqa: F401  (re-exported)

APPROXIMATION_CAVEAT = (
    "nodes are radius-r fingerprints; distinct cones agreeing on the ball are merged"
)


@dataclass(frozen=True)
class Fingerprint:
    radius: int
    bits: tuple[int, ...]

    def hex(self) -> str:
        n = len(self.bits)
        value = int("".join(map(str, self.bits)) or "0", 2)
        width = (n + 3) // 4
        return f"r{self.radius}:{value:0{width}x}" if n else f"r{self.radius}:"

    def __str__(self) -> str:
        return self.hex()

    def complement(self) -> "Fingerprint":
        return Fingerprint(self.radius, tuple(1 - b for b in self.bits))

    def differences(self, other: "Fingerprint") -> list[int]:
        return [i for i, (x, y) in enumerate(zip(self.bits, other.bits)) if x != y]


def fingerprint(cone: Cone, group: Group | None = None, r: int = 2) -> Fingerprint:
    """Bit ``i`` is 1 iff the ``i``-th non-identity ball element (in the
    canonical enumeration, restricted to the cone's domain) is positive."""
    G = group if group is not None else cone.group
    elems = [g for g in ball_of(G, r)[1:] if cone.domain(g)]
    if hasattr(cone, "batch_sign") and hasattr(G, "as_array") and elems:
        signs = cone.batch_sign(G.as_array(elems))
        return Fingerprint(r, tuple(int(s > 0) for s in signs))
    return Fingerprint(r, tuple(int(cone.sign(g) > 0) for g in elems))


@dataclass
class OrbitGraph:
    radius: int
    nodes: list[Fingerprint] = field(default_factory=list)
    edges: list[tuple[int, str, int]] = field(default_factory=list)
    status: str = "closed"

    def __len__(self) -> int:
        return len(self.nodes)

    def summary(self) -> str:
        k = len(self.nodes)
        return f"{self.status}, {k} node{'s' if k != 1 else ''}"

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "status": self.status,
            "nodes": [n.hex() for n in self.nodes],
            "edges": [[s, g, t] for s, g, t in self.edges],
            "caveat": APPROXIMATION_CAVEAT,
        }

    def to_dot(self) -> str:
        lines = ["digraph orbit {", f'  label="{self.summary()} at radius {self.radius}";']
        for i, n in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{n.hex()}"];')
        for s, g, t in self.edges:
            lines.append(f'  n{s} -> n{t} [label="{g}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def orbit_explore(cone: Cone, group: Group | None = None, r: int = 2, max_nodes: int = 64) -> OrbitGraph:
    """Breadth-first closure of ``cone`` under conjugation by generators and
    their inverses, nodes deduplicated by fingerprint."""
    G = group if group is not None else cone.group
    steps = G.letters()
    start = fingerprint(cone, G, r)
    graph = OrbitGraph(r, [start])
    index = {start: 0}
    queue = deque([(0, cone)])
    while queue:
        i, c = queue.popleft()
        for name, g in steps:
            d = conjugate_cone(g, c)
            fp = fingerprint(d, G, r)
            j = index.get(fp)
            if j is None:
                if len(graph.nodes) >= max_nodes:
                    graph.status = "frontier-limited"
                    continue
                j = len(graph.nodes)
                index[fp] = j
                graph.nodes.append(fp)
                queue.append((j, d))
            graph.edges.append((i, name, j))
    return graph


@dataclass(frozen=True)
class OrbitProbe:
    result: str
    k: int | None = None
    radius: int = 0

    def __str__(self) -> str:
        return f"finite({self.k})" if self.result == "finite" else "inconclusive"

    def to_json(self) -> dict:
        out = {"result": self.result, "radius": self.radius}
        if self.k is not None:
            out["k"] = self.k
        return out


def finite_orbit_probe(cone: Cone, group: Group | None = None, r: int = 2, max_nodes: int = 64) -> OrbitProbe:
    """``finite(k)`` when exploration closes with ``k`` fingerprints; never a
    claim that an orbit is infinite."""
    graph = orbit_explore(cone, group, r, max_nodes)
    if graph.status == "closed":
        return OrbitProbe("finite", len(graph.nodes), r)
    return OrbitProbe("inconclusive", None, r)


# -- Tararin cones and the infinite tower ------------------------------------


def tararin_cones(n: int) -> list[TararinCone]:
    """The ``2^n`` sign-vector cones of ``T_n``, ``(+..+)`` first."""
    return [TararinCone(tuple(-s for s in signs)) for signs in product((-1, 1), repeat=n)]


def tinf_encode(eps, span: int = 0) -> TararinCone:
    """Cone on the infinite tower with ``x_i`` positive iff ``eps_i = 1``
    (generators past the truncation are positive)."""
    eps = tuple(int(e) for e in eps)
    if not eps or any(e not in (0, 1) for e in eps):
        raise ValueError("eps must be a non-empty 0/1 sequence")
    return TararinCone(tuple(1 if e else -1 for e in eps), infinite=True, span=span)


def tinf_decode(cone: Cone, m: int) -> tuple[int, ...]:
    """Read the signs of ``x_1 .. x_m``."""
    G = cone.group
    if not isinstance(G, Tararin) or G.n is not None:
        raise ValueError("decode needs a cone on the infinite tower")
    return tuple(int(cone.sign(G.generator(i)) > 0) for i in range(1, m + 1))


def tinf_action(j: int, eps) -> tuple[int, ...]:
    """Effect of conjugating by ``x_j`` on the encoded signs: flips bit ``j-1``."""
    eps = tuple(eps)
    if j < 1:
        raise ValueError("generator index must be positive")
    if j == 1:
        return eps
    if j - 1 > len(eps):
        raise ValueError(f"x{j} flips position {j - 1}, past the truncation {len(eps)}")
    out = list(eps)
    out[j - 2] = 1 - out[j - 2]
    return tuple(out)


def e0_related(eps, other, k: int) -> bool:
    """Whether the sequences agree at every position past ``k``."""
    if len(eps) != len(other):
        raise ValueError("sequences must have equal truncation length")
    return tuple(eps[k:]) == tuple(other[k:])


def flip_orbit(eps, generators=None) -> set[tuple[int, ...]]:
    """Closure of ``eps`` under ``tinf_action`` for the given generator
    indices (default ``x_2 .. x_{m+1}``)."""
    eps = tuple(eps)
    gens = list(generators) if generators is not None else list(range(2, len(eps) + 2))
    seen = {eps}
    queue = deque([eps])
    while queue:
        e = queue.popleft()
        for j in gens:
            f = tinf_action(j, e)
            if f not in seen:
                seen.add(f)
                queue.append(f)
    return seen


def e0_class(eps, k: int) -> set[tuple[int, ...]]:
    eps = tuple(eps)
    return {head + eps[k:] for head in product((0, 1), repeat=k)}


def dump_graph(graph: OrbitGraph) -> str:
    return json.dumps(graph.to_json(), sort_keys=True, indent=2)
