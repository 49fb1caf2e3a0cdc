"""Pure-Python quad index over integer term ids.

Keeps a quad set plus four nested-dict orderings (GSPO, SPOG, POSG,
OSPG). Pattern matching picks the ordering whose key prefix covers the
most bound positions and post-filters the rest, giving O(log-ish + k)
lookups for every pattern shape the query engine produces.
"""

# Each ordering is (attribute, key positions into the (s, p, o, g) tuple).
_INDEX_SPECS = (
    ("_gspo", (3, 0, 1, 2)),
    ("_spog", (0, 1, 2, 3)),
    ("_posg", (1, 2, 0, 3)),
    ("_ospg", (2, 0, 1, 3)),
)


class PyQuadIndex:
    __slots__ = ("_quads", "_gspo", "_spog", "_posg", "_ospg")

    def __init__(self):
        self._quads = set()
        self._gspo = {}
        self._spog = {}
        self._posg = {}
        self._ospg = {}

    def insert(self, s, p, o, g) -> bool:
        quad = (s, p, o, g)
        if quad in self._quads:
            return False
        self._quads.add(quad)
        self._gspo.setdefault(g, {}).setdefault(s, {}).setdefault(p, set()).add(o)
        self._spog.setdefault(s, {}).setdefault(p, {}).setdefault(o, set()).add(g)
        self._posg.setdefault(p, {}).setdefault(o, {}).setdefault(s, set()).add(g)
        self._ospg.setdefault(o, {}).setdefault(s, {}).setdefault(p, set()).add(g)
        return True

    def remove(self, s, p, o, g) -> bool:
        quad = (s, p, o, g)
        if quad not in self._quads:
            return False
        self._quads.discard(quad)
        for attr, order in _INDEX_SPECS:
            keys = [quad[pos] for pos in order]
            root = getattr(self, attr)
            self._prune(root, keys)
        return True

    @staticmethod
    def _prune(root, keys):
        level1 = root[keys[0]]
        level2 = level1[keys[1]]
        leaf = level2[keys[2]]
        leaf.discard(keys[3])
        if not leaf:
            del level2[keys[2]]
            if not level2:
                del level1[keys[1]]
                if not level1:
                    del root[keys[0]]

    def contains(self, s, p, o, g) -> bool:
        return (s, p, o, g) in self._quads

    def count(self) -> int:
        return len(self._quads)

    def graph_ids(self):
        return list(self._gspo.keys())

    def match(self, s, p, o, g):
        pattern = (s, p, o, g)
        if s != -1 and p != -1 and o != -1 and g != -1:
            if pattern in self._quads:
                yield pattern
            return
        best_attr, best_order, best_len = "_spog", (0, 1, 2, 3), -1
        for attr, order in _INDEX_SPECS:
            n = 0
            for pos in order:
                if pattern[pos] == -1:
                    break
                n += 1
            if n > best_len:
                best_attr, best_order, best_len = attr, order, n
        root = getattr(self, best_attr)
        yield from _walk(root, best_order, pattern, 0, [0, 0, 0, 0])

    def copy(self) -> "PyQuadIndex":
        clone = PyQuadIndex()
        clone._quads = set(self._quads)
        clone._gspo = _copy3(self._gspo)
        clone._spog = _copy3(self._spog)
        clone._posg = _copy3(self._posg)
        clone._ospg = _copy3(self._ospg)
        return clone


def _copy3(root):
    return {
        k1: {k2: {k3: set(leaf) for k3, leaf in level2.items()} for k2, level2 in level1.items()}
        for k1, level1 in root.items()
    }


def _walk(node, order, pattern, depth, out):
    pos = order[depth]
    want = pattern[pos]
    if depth == 3:
        if want != -1:
            if want in node:
                out[pos] = want
                yield (out[0], out[1], out[2], out[3])
        else:
            for key in node:
                out[pos] = key
                yield (out[0], out[1], out[2], out[3])
        return
    if want != -1:
        child = node.get(want)
        if child is not None:
            out[pos] = want
            yield from _walk(child, order, pattern, depth + 1, out)
    else:
        for key, child in node.items():
            out[pos] = key
            yield from _walk(child, order, pattern, depth + 1, out)
