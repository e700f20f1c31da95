import json

import pytest

from subdyn.corpus import EXAMPLES, example_document
from subdyn.errors import DocumentError
from subdyn.generate import generate_primary
from subdyn.realize import enumerate_realizations
from subdyn.serialize import (Document, canonical_json, digest, generated_document, loads,
                              validate_document)


def test_canonical_json_is_compact_and_sorted():
    assert canonical_json({"b": 1, "a": ["é", 2]}) == '{"a":["é",2],"b":1}'
    assert digest({"a": 1}) == digest({"a": 1}) != digest({"a": 2})


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_examples_round_trip(name):
    text = example_document(name).dumps()
    doc = loads(text)
    assert validate_document(doc).ok
    assert doc.dumps() == text


def test_transitions_are_sorted():
    obj = json.loads(example_document("diamond").dumps())
    rows = obj["dynamics"]["diamond"]["transitions"]
    assert rows == sorted(rows)


def test_cached_realizations_round_trip(diamond):
    doc = Document()
    doc.add_open_dynamics("A", diamond)
    doc.realizations["A"] = enumerate_realizations(diamond)
    text = doc.dumps()
    back = loads(text)
    assert back.dumps() == text
    assert validate_document(back).ok


def test_generated_document_round_trips(diamond_family):
    g = generate_primary(diamond_family)
    text = generated_document("beta", g, "diamond", "0" * 64).dumps()
    assert loads(text).dumps() == text
    assert json.loads(text)["provenance"]["family"] == "diamond"


def test_overlapping_states_fail_validation():
    obj = json.loads(example_document("diamond").dumps())
    obj["dynamics"]["diamond"]["states"]["U"].append("s")
    rep = validate_document(loads(json.dumps(obj)))
    assert any("disjointness" in m for m in rep.issues)


@pytest.mark.parametrize("text, msg", [
    ("{", "malformed JSON"),
    ("[]", "JSON object"),
    ('{"bogus": {}}', "unknown top-level key"),
    ('{"dynamics": {"d": {"motor": "X"}}}', "unknown motor"),
    ('{"categories": {"X": {"objects": []}}}', "missing key"),
    ('{"categories": {"X": {"objects": 3, "arrows": [], "compose": [], "identities": 5}}}',
     "badly shaped"),
])
def test_bad_documents(text, msg):
    with pytest.raises(DocumentError, match=msg):
        loads(text)
