# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled quad index over integer term ids.

Mirrors the pure-Python backend: one quad set plus four nested-dict
orderings (GSPO, SPOG, POSG, OSPG). Typed locals and unrolled insert /
prune paths remove the interpreter overhead that dominates bulk loads.
"""


cdef tuple _INDEX_ORDERS = ((3, 0, 1, 2), (0, 1, 2, 3), (1, 2, 0, 3), (2, 0, 1, 3))


cdef class CyQuadIndex:
    cdef set _quads
    cdef dict _gspo
    cdef dict _spog
    cdef dict _posg
    cdef dict _ospg

    def __cinit__(self):
        self._quads = set()
        self._gspo = {}
        self._spog = {}
        self._posg = {}
        self._ospg = {}

    cdef inline void _index_add(self, dict root, object k1, object k2, object k3, object k4):
        cdef dict level1, level2
        cdef set leaf
        obj = root.get(k1)
        if obj is None:
            level1 = {}
            root[k1] = level1
        else:
            level1 = <dict>obj
        obj = level1.get(k2)
        if obj is None:
            level2 = {}
            level1[k2] = level2
        else:
            level2 = <dict>obj
        obj = level2.get(k3)
        if obj is None:
            leaf = set()
            level2[k3] = leaf
        else:
            leaf = <set>obj
        leaf.add(k4)

    cpdef bint insert(self, long s, long p, long o, long g):
        cdef tuple quad = (s, p, o, g)
        if quad in self._quads:
            return False
        self._quads.add(quad)
        self._index_add(self._gspo, quad[3], quad[0], quad[1], quad[2])
        self._index_add(self._spog, quad[0], quad[1], quad[2], quad[3])
        self._index_add(self._posg, quad[1], quad[2], quad[0], quad[3])
        self._index_add(self._ospg, quad[2], quad[0], quad[1], quad[3])
        return True

    cdef inline void _index_prune(self, dict root, object k1, object k2, object k3, object k4):
        cdef dict level1 = <dict>root[k1]
        cdef dict level2 = <dict>level1[k2]
        cdef set leaf = <set>level2[k3]
        leaf.discard(k4)
        if not leaf:
            del level2[k3]
            if not level2:
                del level1[k2]
                if not level1:
                    del root[k1]

    cpdef bint remove(self, long s, long p, long o, long g):
        cdef tuple quad = (s, p, o, g)
        if quad not in self._quads:
            return False
        self._quads.discard(quad)
        self._index_prune(self._gspo, quad[3], quad[0], quad[1], quad[2])
        self._index_prune(self._spog, quad[0], quad[1], quad[2], quad[3])
        self._index_prune(self._posg, quad[1], quad[2], quad[0], quad[3])
        self._index_prune(self._ospg, quad[2], quad[0], quad[1], quad[3])
        return True

    cpdef bint contains(self, long s, long p, long o, long g):
        return (s, p, o, g) in self._quads

    cpdef long count(self):
        return len(self._quads)

    def graph_ids(self):
        return list(self._gspo.keys())

    def match(self, long s, long p, long o, long g):
        cdef tuple pattern = (s, p, o, g)
        if s != -1 and p != -1 and o != -1 and g != -1:
            if pattern in self._quads:
                yield pattern
            return
        cdef int best_index = 1, best_len = -1, n, i
        cdef tuple order
        for i in range(4):
            order = <tuple>_INDEX_ORDERS[i]
            n = 0
            while n < 4 and pattern[<long>order[n]] != -1:
                n += 1
            if n > best_len:
                best_index = i
                best_len = n
        if best_index == 0:
            root = self._gspo
        elif best_index == 1:
            root = self._spog
        elif best_index == 2:
            root = self._posg
        else:
            root = self._ospg
        order = <tuple>_INDEX_ORDERS[best_index]
        yield from _walk(root, order, pattern, 0, [0, 0, 0, 0])

    def copy(self):
        cdef CyQuadIndex clone = CyQuadIndex()
        clone._quads = set(self._quads)
        clone._gspo = _copy3(self._gspo)
        clone._spog = _copy3(self._spog)
        clone._posg = _copy3(self._posg)
        clone._ospg = _copy3(self._ospg)
        return clone


cdef dict _copy3(dict root):
    cdef dict out = {}
    cdef dict level1, new1, level2, new2
    for k1, v1 in root.items():
        level1 = <dict>v1
        new1 = {}
        for k2, v2 in level1.items():
            level2 = <dict>v2
            new2 = {}
            for k3, leaf in level2.items():
                new2[k3] = set(<set>leaf)
            new1[k2] = new2
        out[k1] = new1
    return out


def _walk(node, tuple order, tuple pattern, int depth, list out):
    cdef long pos = <long>order[depth]
    want = pattern[pos]
    if depth == 3:
        if want != -1:
            if want in (<set>node):
                out[pos] = want
                yield (out[0], out[1], out[2], out[3])
        else:
            for key in (<set>node):
                out[pos] = key
                yield (out[0], out[1], out[2], out[3])
        return
    if want != -1:
        child = (<dict>node).get(want)
        if child is not None:
            out[pos] = want
            yield from _walk(child, order, pattern, depth + 1, out)
    else:
        for key, child in (<dict>node).items():
            out[pos] = key
            yield from _walk(child, order, pattern, depth + 1, out)
