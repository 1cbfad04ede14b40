"""
Commuting tuples of p-elements
==============================

C_{n,p}(G) is the set of conjugacy classes of n-tuples of pairwise commuting
elements of p-power order. Three independent counts must agree.
"""
from fglchar.groups import (
    burnside_count,
    centralizer_count_oracle,
    corpus_groups,
    matrix_action,
    tuple_classes,
)

groups = corpus_groups()

# %%
# S3 at p = 3: the identity and the two 3-cycles give 2 classes of elements
# and 5 classes of commuting pairs.
S3 = groups["S3"]
for n in (1, 2, 3):
    S = tuple_classes(S3, n, 3)
    print(f"|C_{n},3(S3)| =", len(S), [c.rep for c in S.classes])

# %%
# Orbit enumeration, the centralizer recursion and Burnside's lemma.
print(f"{'group':6} {'n':>2} {'p':>2} {'orbits':>7} {'recursion':>10} {'burnside':>9}")
for name, G in groups.items():
    for p in (2, 3):
        for n in (1, 2, 3):
            print(f"{name:6} {n:>2} {p:>2} {len(tuple_classes(G, n, p)):>7} "
                  f"{centralizer_count_oracle(G, n, p):>10} {burnside_count(G, n, p):>9}")

# %%
# GL_n acts on the right: (t_i) -> (prod_j t_j^M[j][i]). Swapping the two
# entries of a pair exchanges the classes of (e, a) and (a, e).
S = tuple_classes(S3, 2, 3)
swap = matrix_action(S, [[0, 1], [1, 0]])
for k, c in enumerate(S.classes):
    print(c.rep, "->", S.classes[swap[k]].rep)
