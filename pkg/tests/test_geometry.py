import itertools
import json

import numpy as np
import pytest

from polarcl.geometry import (
    CapacityError,
    Family,
    PolarSpaceKind,
    SpaceError,
    Subspace,
    build_space,
    classify_section,
    classify_type,
    hyperplane_section,
    hyperplanes,
    intersection_dim,
    isotropic_subspaces,
    load_space,
    nucleus_projection,
    perp,
)

COUNTS = [
    # shorthand, points, generators (product formula evaluated by hand)
    ("W:3:2", 15, 15),
    ("Q+:5:2", 35, 30),
    ("W:5:2", 63, 135),
    ("Q:4:2", 15, 15),
    ("Q:6:2", 63, 135),
    ("Q-:5:2", 27, 45),
    ("H:3:4", 45, 27),
    ("H:4:4", 165, 297),
    ("Q+:7:2", 135, 270),
    ("W:3:3", 40, 40),
    ("Q-:7:2", 119, 765),
]


@pytest.mark.parametrize("text,points,gens", COUNTS)
def test_enumeration_counts(text, points, gens):
    space = load_space(text)
    assert space.num_points == points == space.kind.num_points
    assert space.num_generators == gens == space.kind.num_generators
    assert len(set(g.key for g in space.generators)) == gens


def _brute_isotropic(q_form, n_vars, k):
    """Totally singular k-spaces over GF(2), found by closing pairwise-orthogonal k-tuples."""
    pts = [v for v in itertools.product(range(2), repeat=n_vars) if any(v) and q_form(v) == 0]

    def add(u, v):
        return tuple((a + b) % 2 for a, b in zip(u, v))

    found = set()
    for combo in itertools.combinations(pts, k):
        span = {tuple([0] * n_vars)}
        for v in combo:
            span |= {add(s, v) for s in span}
        if len(span) != 2 ** k:
            continue
        if all(q_form(s) == 0 for s in span):
            found.add(frozenset(span))
    return len(pts), len(found)


def test_brute_force_w32():
    # alternating form: every vector is isotropic, lines need orthogonality
    pts = [v for v in itertools.product(range(2), repeat=4) if any(v)]

    def f(u, v):
        return (u[0] * v[1] + u[1] * v[0] + u[2] * v[3] + u[3] * v[2]) % 2

    lines = {frozenset((u, v, tuple((a + b) % 2 for a, b in zip(u, v))))
             for u, v in itertools.combinations(pts, 2) if f(u, v) == 0}
    assert (len(pts), len(lines)) == (15, 15)


def test_brute_force_hyperbolic_q52():
    def Q(v):
        return (v[0] * v[1] + v[2] * v[3] + v[4] * v[5]) % 2

    assert _brute_isotropic(Q, 6, 3) == (35, 30)


def test_generator_pair_counts_w32(w32):
    dims = w32.intersection_dims
    for g in range(15):
        row = [int(dims[g, h]) for h in range(15) if h != g]
        # projective dimensions: 0 is a common point, -1 is skew
        assert row.count(0) == 6
        assert row.count(-1) == 8


def test_relation_matrix_symmetric(w52):
    R = w52.relation_matrix
    assert (R == R.T).all()
    assert (np.diag(R) == 0).all()
    assert set(np.unique(R)) == {0, 1, 2, 3}


@pytest.mark.parametrize("text,expected", [
    ("Q+:5:2", "I"), ("Q+:7:2", "II"), ("W:5:2", "III"), ("Q:6:2", "III"),
    ("W:3:2", "I"), ("Q-:5:2", "I"), ("H:4:4", "I"), ("Q:4:3", "I"),
])
def test_type_classification(text, expected):
    assert classify_type(PolarSpaceKind.parse(text)) == expected


def test_kind_parsing_roundtrip():
    k = PolarSpaceKind.parse("W:5:2")
    assert (k.family, k.d, k.q, k.n) == (Family.SYMPLECTIC, 3, 2, 5)
    assert k.label == "W(5,2)"
    assert PolarSpaceKind.parse(json.dumps(k.descriptor())) == k
    assert PolarSpaceKind.from_descriptor(k.descriptor()) == k
    h = PolarSpaceKind.parse("H:4:4")
    assert h.family is Family.HERMITIAN_EVEN and h.d == 2
    assert str(PolarSpaceKind.parse("Q-:5:2").e) == "2"
    assert str(h.e) == "3/2"


@pytest.mark.parametrize("bad", ["X:3:2", "W:4:2", "W:3:6", "H:3:2", "nonsense", "{\"kind\": \"W\"}"])
def test_bad_kinds_rejected(bad):
    with pytest.raises((SpaceError, ValueError)):
        PolarSpaceKind.parse(bad)


def test_capacity_guard():
    with pytest.raises(CapacityError):
        build_space("W:9:2", cap=10_000)


def test_perp_of_point_is_cone(q62):
    P = Subspace.span(q62.field, [q62.points[0]])
    H = perp(q62, P)
    assert H.dim == 5
    mask = q62.subspace_mask(H)
    assert bin(mask).count("1") == 1 + 2 * 15


def test_isotropic_lines_of_w32(w32):
    assert len(isotropic_subspaces(w32, 2)) == 15
    assert len(isotropic_subspaces(w32, 1)) == 15


def test_intersection_dim_is_symmetric(w52):
    a, b = w52.generators[0], w52.generators[7]
    assert intersection_dim(w52.field, a, b) == intersection_dim(w52.field, b, a)
    assert intersection_dim(w52.field, a, a) == 2


def test_section_kinds_of_q62(q62):
    kinds = [classify_section(q62, h) for h in hyperplanes(q62)]
    assert (kinds.count("cone"), kinds.count("hyperbolic"), kinds.count("elliptic")) == (63, 36, 28)


def test_hyperbolic_section_generators_are_parent_generators(q62):
    h = next(hyperplanes(q62, "hyperbolic"))
    sec = hyperplane_section(q62, h)
    assert sec.space.kind.family is Family.HYPERBOLIC
    assert sec.space.num_generators == 30
    assert len(set(sec.generator_indices)) == 30
    pts = set(sec.point_indices)
    for g in sec.generator_indices:
        assert set(q62.points_of(q62.generator_masks[g])) <= pts


def test_elliptic_section_has_line_generators(q62):
    h = next(hyperplanes(q62, "elliptic"))
    sec = hyperplane_section(q62, h)
    assert sec.space.kind.family is Family.ELLIPTIC
    assert sec.space.d == 2 and sec.space.num_generators == 45
    assert sec.generator_indices == []


def test_nucleus_projection_bijection(q62, w52):
    proj = nucleus_projection(q62, w52)
    assert sorted(proj.generator_map) == list(range(135))
    assert sorted(proj.point_map) == list(range(63))
    src, tgt = q62.intersection_dims, w52.intersection_dims
    g = np.asarray(proj.generator_map)
    assert (tgt[np.ix_(g, g)] == src).all()


def test_projected_section_is_hyperbolic_in_w52(q62, w52):
    proj = nucleus_projection(q62, w52)
    sec = hyperplane_section(q62, next(hyperplanes(q62, "hyperbolic")))
    img = proj.image_space(sec.space)
    assert img.parent is w52
    assert img.num_generators == 30
    assert sorted(img.parent_generator_index) == proj.map_generators(sec.generator_indices)


def test_projection_needs_even_q():
    with pytest.raises(SpaceError):
        nucleus_projection(load_space("Q:4:3"))


def test_export_is_json_serialisable(w32):
    data = json.loads(json.dumps(w32.export()))
    assert len(data["generators"]) == 15
