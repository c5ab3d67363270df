# Copyright 2026 The Scriptorium Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the Python extension: each binding round-trips once."""

import os
import pathlib
import random

import numpy as np
import pytest

import scriptorium as sc

FIXTURES = pathlib.Path(
    os.environ.get("SCRIPTORIUM_FIXTURES", pathlib.Path(__file__).resolve().parents[1] / "fixtures")
)
DATA = FIXTURES.parents[1] / "data"


def read(path):
    return pathlib.Path(path).read_text(encoding="utf-8")


def levenshtein(a, b):
    # plain two-row DP over Python sequences
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def test_graphemes_keep_combining_marks():
    assert sc.graphemes(sc.nfc("q̄ ē")) == ["q̄", " ", "ē"]


def test_policy_validation_positions():
    policy = sc.Policy.parse(read(DATA / "policy.example.tsv"))
    assert len(policy) == 40
    assert policy.authorizes("ē")  # composed form covered by its parts
    found = policy.validate("in principio\nDixit\n")
    assert [(v["line"], v["grapheme"], v["cluster"]) for v in found] == [(1, 0, "D")]
    kinds = {f["kind"] for f in policy.audit()}
    assert kinds == {"lowercase-collision"}


def test_policy_errors_are_catchable():
    with pytest.raises(sc.ScriptoriumError):
        sc.Policy.parse("a\tbase-letter\t\t\na\tbase-letter\t\t\n")
    with pytest.raises(ValueError):  # the base class doubles as ValueError
        sc.Policy.parse("")


def test_rules_reconstruct_source():
    rules = sc.Rules.parse(read(FIXTURES / "genesis" / "rules.tsv"))
    text = read(FIXTURES / "genesis" / "gen_9_15.txt").splitlines()[0]
    out = rules.apply(text)
    assert "quod pepigi" in out["derived"]
    assert "universam" in out["derived"]
    assert out["reconstructed"] == sc.nfc(text)
    assert all(isinstance(s["source"], tuple) for s in out["offset_map"])
    assert rules.apply(text, "diplomatic")["derived"] == sc.nfc(text)


def test_edit_distance_matches_python_oracle():
    rng = random.Random(7)
    alphabet = ["a", "e", "ē", "q̄", "ſ", " "]
    for _ in range(200):
        a = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
        b = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
        ref, hyp = "".join(a), "".join(b)
        assert sc.edit_distance(ref, hyp) == levenshtein(sc.graphemes(ref), sc.graphemes(hyp))
    assert sc.cer("abcd", "abed") == pytest.approx(25.0)


def test_collation_finds_the_omitted_clause():
    rules = sc.Rules.parse(read(FIXTURES / "genesis" / "rules.tsv"))
    found = sc.variants(
        read(FIXTURES / "genesis" / "gen_17_20.txt"), rules, read(FIXTURES / "genesis" / "vulgate_genesis.tsv")
    )
    assert [(v["kind"], v["normalised"], v["verse"]) for v in found] == [("insertion", "crescere", "Gen 17:20")]
    score, ops = sc.align(["in", "principio"], ["in", "principio"])
    assert score == pytest.approx(2.0)
    assert [op[0] for op in ops] == ["match", "match"]


def test_density_counts_every_match():
    docs = {"a": ["ðns", "x", "ðni", "y"], "b": ["x", "y"]}
    counts = sc.density(docs, "ðn*", bins=2)
    assert counts == {"a": [1, 1], "b": [0, 0]}
    svg = sc.density_svg({k: [float(c) for c in v] for k, v in counts.items()}, "ðn*")
    assert svg.count('class="bar"') == 4


def test_rolling_delta_labels_each_window():
    rng = random.Random(3)
    vocab = [f"w{i}" for i in range(30)]
    hand_a = [rng.choice(vocab[:20]) for _ in range(3000)]
    hand_b = [rng.choice(vocab[10:]) for _ in range(3000)]
    windows = sc.rolling_delta(hand_a[:1000] + hand_b[:1000], {"A": hand_a, "B": hand_b}, window=500, step=250)
    assert windows[0]["label"] == "A"
    assert windows[-1]["label"] == "B"
    assert all(len(w["distances"]) == 2 for w in windows)


def test_tfidf_pca_returns_numpy():
    docs = {f"d{i}": ["et"] * (i + 1) + ["in"] * (5 - i) + ["deus"] for i in range(5)}
    out = sc.tfidf_pca(docs, top_k=3)
    assert isinstance(out["scores"], np.ndarray)
    assert out["scores"].shape == (5, 2)
    loadings = out["loadings"]
    np.testing.assert_allclose(loadings.T @ loadings, np.eye(loadings.shape[1]), atol=1e-9)
    assert np.all(np.diff(out["explained_variance"]) <= 1e-12)
    with pytest.raises(sc.ScriptoriumError):
        sc.tfidf_pca({"a": ["x"], "b": ["y"]})


def test_manifest_and_provenance():
    record = sc.parse_manifest(read(FIXTURES / "iiif" / "manifest_v3.json"))
    assert record["version"] == 3
    assert record["canvases"] == 3
    assert ("Shelfmark", "MS Lat. 15") in record["metadata"]
    prov = sc.normalize_provenance("England or France", "13th century")
    assert prov["origins"] == {"EN", "FR"}
    assert (prov["year_from"], prov["year_to"]) == (1200, 1300)
    assert prov["confidence"] == "stated"
