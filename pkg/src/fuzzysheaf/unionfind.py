"""Disjoint-set forest keyed by arbitrary hashable, orderable items."""

from __future__ import annotations


class UnionFind:
    """Union-find whose class representative is always the least member."""

    def __init__(self, items=()):
        self.parent = {}
        for item in items:
            self.add(item)

    def add(self, item) -> None:
        self.parent.setdefault(item, item)

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the least element as root so representatives are canonical
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def classes(self) -> dict:
        """Map representative -> sorted list of members."""
        out = {}
        for item in self.parent:
            out.setdefault(self.find(item), []).append(item)
        return {rep: sorted(members) for rep, members in sorted(out.items())}
