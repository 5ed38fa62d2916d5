"""Hypothesis strategies shared by the property tests."""
import random

from hypothesis import strategies as st

from adandor import ClassTree
from adandor.generate import random_coloring_instance, random_graph


@st.composite
def class_trees(draw, n_colors=3, depth=3):
    color = draw(st.integers(0, n_colors - 1))
    if depth == 0:
        return ClassTree(color)
    kid_colors = draw(st.lists(st.integers(0, n_colors - 1), max_size=3, unique=True))
    kids = tuple(draw(class_trees(n_colors, depth - 1)) for _ in sorted(kid_colors))
    kids = tuple(ClassTree(c, k.children) for c, k in zip(sorted(kid_colors), kids))
    return ClassTree(color, kids)


seeds = st.integers(0, 2 ** 32 - 1)


@st.composite
def small_graphs(draw, max_or=12, n_colors=3):
    return random_graph(random.Random(draw(seeds)), max_or, n_colors, max_solutions=2000)


@st.composite
def coloring_instances(draw, max_nodes=6, max_colors=3):
    return random_coloring_instance(random.Random(draw(seeds)), max_nodes, max_colors)
