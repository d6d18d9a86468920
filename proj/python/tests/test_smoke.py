# Copyright 2026 The evsum Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import pytest

import evsum

VECTORS = "cat 1.0 0.0\ndog 0.0 1.0\ncar 1.0 0.1\n"


@pytest.fixture
def stack():
    table = evsum.load_vectors_text(VECTORS, name="toy")
    return evsum.EmbeddingStack([table])


def test_tokenize_spans():
    doc = evsum.tokenize("We  stand at")
    assert len(doc) == 3
    assert [t.text for t in doc.tokens] == ["We", "stand", "at"]
    assert (doc.tokens[1].byte_start, doc.tokens[1].byte_end) == (4, 9)
    assert evsum.lookup_candidates("Cat,") == ["Cat,", "cat,", "Cat", "cat"]


def test_tables_and_stack(stack):
    table = evsum.load_vectors_text("2 2\n" + VECTORS.split("\n", 1)[1] + "x 1 1\n")
    assert table.dimension == 2
    assert len(table) == 3
    assert stack.total_dimension == 2
    assert stack.names == ["toy"]
    assert stack.lookup("Dog.") == [0.0, 1.0]
    assert stack.lookup("unknown") == [0.0, 0.0]


def test_window_bounds():
    assert evsum.window_bounds(0, 100, 6) == (0, 2)
    assert evsum.window_bounds(4, 100, 6) == (1, 6)


def test_score_select_and_render(stack):
    doc = evsum.tokenize("cat dog")
    scores = evsum.score_document(doc, stack, "cat", window=2)
    assert scores.scores[0] == pytest.approx(1.0)
    assert scores.scores[1] == pytest.approx(1 / math.sqrt(2))

    sel = evsum.select(scores, 50, 50)
    assert sel.underlined == [True, False]
    assert sel.underline_count() == 1
    assert evsum.render(doc, scores, sel, "card", tag="T") == "T\n\n*cat* dog"
    spans = json.loads(evsum.render(doc, scores, sel, "spans"))
    assert [s["tier"] for s in spans["spans"]] == ["underline", "highlight"]


def test_unbiased_sentinel(stack):
    doc = evsum.tokenize("cat dog car")
    a = evsum.score_document(doc, stack, "-1")
    b = evsum.score_document(doc, stack, "cat dog car")
    assert a.scores == b.scores
    assert a.fingerprint == b.fingerprint


def test_search(stack):
    doc = evsum.tokenize("cat dog car")
    hits = evsum.search(doc, stack, "cat", k=2, window=1)
    assert [h.token_index for h in hits] == [0, 2]
    assert hits[0].rank == 1


def test_errors(stack):
    with pytest.raises(evsum.EvsumError, match="UnbiasedQueryNotSearchable"):
        evsum.search(evsum.tokenize("cat"), stack, "-1")
    with pytest.raises(evsum.EvsumError, match="InconsistentDimension"):
        evsum.load_vectors_text("a 1 2\nb 1\n")
    with pytest.raises(ValueError):
        evsum.score_document(evsum.tokenize(""), stack, "cat")
