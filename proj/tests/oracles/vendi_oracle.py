# Copyright 2026 The verimoa Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent Vendi oracle for the LIFO fixture windows.

Re-implements the char-3-gram cosine kernel in Python and takes the
eigenvalues with numpy's dense solver. Writes expected.json next to the
windows file; the C++ harness test compares against it.

usage: python3 vendi_oracle.py data/fixtures/lifo
"""
import collections
import json
import pathlib
import sys

import numpy as np


def trigrams(text):
    norm = " ".join(text.split())
    if not norm:
        return collections.Counter()
    if len(norm) < 3:
        return collections.Counter([norm])
    return collections.Counter(norm[i:i + 3] for i in range(len(norm) - 2))


def cosine(a, b):
    if not a or not b:
        return 1.0 if not a and not b else 0.0
    dot = sum(v * b.get(g, 0) for g, v in a.items())
    na = sum(v * v for v in a.values())
    nb = sum(v * v for v in b.values())
    return dot / (na * nb) ** 0.5


def vendi(texts):
    m = len(texts)
    profiles = [trigrams(t) for t in texts]
    k = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            k[i, j] = k[j, i] = min(1.0, cosine(profiles[i], profiles[j]))
    lam = np.linalg.eigvalsh(k / m)
    lam = lam[lam > 1e-12]
    return float(np.exp(-(lam * np.log(lam)).sum()))


def main():
    root = pathlib.Path(sys.argv[1])
    spec = json.loads((root / "windows.json").read_text())
    out = []
    for w in spec["windows"]:
        texts = [(root / f).read_text() for f in w["files"]]
        out.append({"layer": w["layer"], "vendi": vendi(texts)})
    (root / "expected.json").write_text(json.dumps({"windows": out}, indent=2) + "\n")
    for w in out:
        print(f"layer {w['layer']}: {w['vendi']:.12f}")


if __name__ == "__main__":
    main()
