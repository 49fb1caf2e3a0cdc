import random

from kgsu.model import Dataset, Iri, Literal, Quad


def random_term(rng: random.Random, n_values: int = 12):
    kind = rng.randrange(3)
    i = rng.randrange(n_values)
    if kind == 0:
        return Iri(f"http://example.com/r{i}")
    if kind == 1:
        return Literal(f"v{i}")
    return Literal(f"v{i}", language="en")


def random_quad(rng: random.Random, n_values: int = 12) -> Quad:
    s = Iri(f"http://example.com/s{rng.randrange(n_values)}")
    p = Iri(f"http://example.com/p{rng.randrange(4)}")
    o = random_term(rng, n_values)
    if rng.random() < 0.7:
        return Quad(s, p, o, Iri(f"http://example.com/g{rng.randrange(3)}"))
    return Quad(s, p, o)


def random_dataset(rng: random.Random, n_quads: int, backend: str = "python") -> Dataset:
    ds = Dataset(backend=backend)
    for _ in range(n_quads):
        ds.add(random_quad(rng))
    return ds
