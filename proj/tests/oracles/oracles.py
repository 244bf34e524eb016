# Copyright 2026 The maskinfo Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference values frozen into the C++ tests.

Run: python3 tests/oracles/oracles.py
Uses scikit-learn, scipy and networkx only; nothing here imports the
library under test.
"""
import math

import networkx as nx
import numpy as np
from scipy.spatial.distance import jensenshannon
from sklearn.metrics import mutual_info_score


def mi_bits(pairs):
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    return mutual_info_score(xs, ys) / math.log(2)


def expand(counts):
    out = []
    for (x, y), n in counts.items():
        out += [(x, y)] * n
    return out


def jsd_bits(p, q):
    return jensenshannon(p, q, base=2) ** 2


def main():
    print("mi_2112", repr(mi_bits(expand({("a", 0): 2, ("a", 1): 1, ("b", 0): 1, ("b", 1): 2}))))
    print("jsd_55_91", repr(jsd_bits([0.5, 0.5], [0.9, 0.1])))

    # 3-label toy table, tau = 0.3 keeps b (0.25) and c (0.125).
    toy = {("a", 0): 6, ("a", 1): 4, ("b", 0): 1, ("b", 1): 3, ("c", 0): 2, ("c", 1): 0}
    n = sum(toy.values())
    s = [x for x in "abc" if (toy[(x, 0)] + toy[(x, 1)]) / n < 0.3]
    m1 = sum(toy[(x, 1)] for x in s)
    m0 = sum(toy[(x, 0)] for x in s)
    p1 = [toy[(x, 1)] / m1 for x in s]
    p0 = [toy[(x, 0)] / m0 for x in s]
    print("toy_S", s, "p1", p1, "p0", p0, "jsd", repr(jsd_bits(p1, p0)))
    print("toy_full_mi", repr(mi_bits(expand(toy))))

    # PageRank with uniform teleport on undirected graphs.
    graphs = {
        "path3": nx.path_graph(3),
        "star4": nx.star_graph(4),
        "toluene": nx.Graph([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (5, 6)]),
    }
    for name, g in graphs.items():
        pr = nx.pagerank(g, alpha=0.85, tol=1e-14, max_iter=10000)
        print("pagerank", name, [repr(pr[i]) for i in sorted(g.nodes)])

    # Random contingency tables for the estimator equivalence check.
    rng = np.random.default_rng(7)
    for t in range(24):
        rows = rng.integers(1, 7)
        c = rng.integers(0, 20, size=(rows, 2))
        c[0, 0] += 1
        pairs = [(i, j) for i in range(rows) for j in range(2) for _ in range(c[i, j])]
        print("table", t, c.tolist(), repr(mi_bits(pairs)))


if __name__ == "__main__":
    main()
