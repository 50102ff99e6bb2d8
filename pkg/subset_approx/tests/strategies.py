from hypothesis import strategies as st

from subset_approx.problems import Graph, SetSystem


@st.composite
def graphs(draw, min_vertices=0, max_vertices=7):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, chosen) if keep])


@st.composite
def set_systems(draw, max_ground=6, max_sets=6):
    n_ground = draw(st.integers(1, max_ground))
    element = st.integers(0, n_ground - 1)
    sets = draw(
        st.lists(st.lists(element, max_size=n_ground), min_size=1, max_size=max_sets)
    )
    return SetSystem.from_sets(n_ground, sets)


@st.composite
def coverable_set_systems(draw, max_ground=6, max_sets=6):
    system = draw(set_systems(max_ground, max_sets))
    missing = system.ground_mask
    for s in system.sets:
        missing &= ~s
    # one extra set holding whatever the drawn family misses
    if missing:
        system = SetSystem(system.n_ground, system.sets + (missing,))
    return system
