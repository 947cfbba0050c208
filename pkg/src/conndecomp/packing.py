"""Weighted tree collections and their JSON wire format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class WeightedTree:
    id: int
    weight: float
    edges: list  # canonical (u, v) pairs
    vertices: list = field(default_factory=list)  # only needed for edgeless trees

    def vertex_set(self) -> set:
        s = {x for e in self.edges for x in e}
        s.update(self.vertices)
        return s

    def to_json(self) -> dict:
        d = {"id": self.id, "weight": self.weight, "edges": [list(e) for e in self.edges]}
        if not self.edges:
            d["vertices"] = list(self.vertices)
        return d

    @staticmethod
    def from_json(d: dict) -> "WeightedTree":
        edges = [tuple(sorted(e)) for e in d["edges"]]
        return WeightedTree(
            id=int(d["id"]),
            weight=float(d["weight"]),
            edges=edges,
            vertices=[int(v) for v in d.get("vertices", [])],
        )


@dataclass
class TreePacking:
    """A collection of weighted trees (dominating or spanning)."""

    trees: list  # of WeightedTree

    @property
    def total_weight(self) -> float:
        return sum(t.weight for t in self.trees)

    def to_json(self) -> dict:
        return {"trees": [t.to_json() for t in self.trees]}

    @staticmethod
    def from_json(d: dict) -> "TreePacking":
        trees = d["trees"]
        if isinstance(trees, dict):
            # a richer packing report embedding a TreePacking under "trees"
            trees = trees["trees"]
        return TreePacking(trees=[WeightedTree.from_json(t) for t in trees])

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)

    @staticmethod
    def load(path) -> "TreePacking":
        with open(path) as fh:
            return TreePacking.from_json(json.load(fh))
