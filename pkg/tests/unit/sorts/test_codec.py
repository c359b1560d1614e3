"""Unit tests for qualifier_reasoner.sorts.codec - canonical sort JSON."""

from __future__ import annotations

from typing import TYPE_CHECKING

import pytest
from hypothesis import given, settings

from qualifier_reasoner.exceptions import SortDecodeError
from qualifier_reasoner.sorts.annotations import EMPTY_ANNOTATIONS, Annotations
from qualifier_reasoner.sorts.categories import SortCategory
from qualifier_reasoner.sorts.causality import EMPTY_CAUSE, NO_VALUE_CAUSE, Causality
from qualifier_reasoner.sorts.codec import decode_sort, encode_sort, sort_from_json
from qualifier_reasoner.sorts.provenance import EMPTY_PROVENANCE, Provenance
from qualifier_reasoner.sorts.sequence import EMPTY_SEQUENCE, SequenceNode
from qualifier_reasoner.sorts.validity import (
    BOTTOM_VALIDITY,
    EMPTY_VALIDITY,
    SpaceRegion,
    TimeInterval,
    ValidityContext,
    dimensions,
)
from qualifier_reasoner.values import DataValue, Iri, SpecialValue
from tests.conftest import during, utc
from tests.unit.sorts.strategies import (
    annotations,
    causalities,
    dimensioned_validities,
    provenances,
    sequences,
    sub_second_moments,
)

if TYPE_CHECKING:
    from datetime import datetime


class TestEncode:
    """encode_sort produces canonical bytes."""

    @pytest.mark.parametrize(
        "value",
        [EMPTY_VALIDITY, EMPTY_CAUSE, EMPTY_SEQUENCE, EMPTY_ANNOTATIONS, EMPTY_PROVENANCE],
    )
    def test_empty_values_encode_as_empty_object(self, value: object) -> None:
        assert encode_sort(value) == "{}"  # type: ignore[arg-type]

    def test_marriage_validity(self) -> None:
        assert encode_sort(during(utc(1960), utc(1965))) == (
            '{"space":{},"time":{"end":"1965-01-01T00:00:00Z","start":"1960-01-01T00:00:00Z"}}'
        )

    def test_open_interval_omits_end(self) -> None:
        assert encode_sort(during(utc(2009, 1, 20), None)) == (
            '{"space":{},"time":{"start":"2009-01-20T00:00:00Z"}}'
        )

    def test_bottom_validity(self) -> None:
        assert encode_sort(BOTTOM_VALIDITY) == '{"space":{"empty":true},"time":{"empty":true}}'

    def test_region_and_dimensions(self) -> None:
        value = ValidityContext(
            space=SpaceRegion(Iri("wd:Q1454")),
            dimensions=dimensions({Iri("wd:P642"): [Iri("wd:Q2"), Iri("wd:Q1")]}),
        )
        assert encode_sort(value) == (
            '{"dimensions":{"wd:P642":["wd:Q1","wd:Q2"]},'
            '"space":{"region":"wd:Q1454"},"time":{}}'
        )

    def test_causality_sets_sorted(self) -> None:
        value = Causality(end_cause=frozenset({Iri("wd:Q93190"), Iri("wd:Q4")}))
        assert encode_sort(value) == '{"endCause":["wd:Q4","wd:Q93190"],"hasCause":[]}'

    def test_no_value_causality(self) -> None:
        assert encode_sort(NO_VALUE_CAUSE) == '{"noValue":true}'

    def test_sequence(self) -> None:
        value = SequenceNode(Iri("wd:Q207"), Iri("wd:Q22686"), 44)
        assert encode_sort(value) == '{"next":"wd:Q22686","ordinal":44,"previous":"wd:Q207"}'

    def test_annotations_with_mixed_values(self) -> None:
        value = Annotations.from_mapping(
            {Iri("wd:P2308"): [Iri("wd:Q5"), SpecialValue.SOME_VALUE, DataValue("x")]}
        )
        assert encode_sort(value) == (
            '{"wd:P2308":["wd:Q5",{"datatype":"xsd:string","lexical":"x"},'
            '{"special":"someValue"}]}'
        )

    def test_equal_values_equal_bytes(self) -> None:
        a = Provenance(frozenset({Iri("wd:Q2"), Iri("wd:Q1")}))
        b = Provenance(frozenset({Iri("wd:Q1"), Iri("wd:Q2")}))
        assert encode_sort(a) == encode_sort(b) == '{"sources":["wd:Q1","wd:Q2"]}'

    def test_non_sort_rejected(self) -> None:
        with pytest.raises(TypeError, match="not a sort value"):
            encode_sort("wd:Q1")  # type: ignore[arg-type]


class TestDecode:
    """decode_sort inverts encode_sort and validates the schema."""

    def test_validity_roundtrip(self) -> None:
        value = ValidityContext(
            TimeInterval(utc(1775, 5, 10), utc(1776, 7, 4)),
            SpaceRegion(Iri("wd:Q1454")),
        )
        assert decode_sort(SortCategory.VALIDITY, encode_sort(value)) == value

    def test_empty_object_is_empty_value(self) -> None:
        assert decode_sort(SortCategory.VALIDITY, "{}") == EMPTY_VALIDITY
        assert decode_sort(SortCategory.CAUSALITY, "{}") == EMPTY_CAUSE

    def test_legacy_lower_case_causality(self) -> None:
        decoded = decode_sort(SortCategory.CAUSALITY, '{"endcause":["wd:Q93190"]}')
        assert decoded == Causality(end_cause=frozenset({Iri("wd:Q93190")}))

    def test_date_only_time_accepted(self) -> None:
        decoded = sort_from_json(SortCategory.VALIDITY, {"time": {"start": "1960-01-01"}})
        assert decoded == during(utc(1960), None)

    @pytest.mark.parametrize(
        ("category", "text", "message"),
        [
            (SortCategory.VALIDITY, "[]", "expected a JSON object"),
            (SortCategory.VALIDITY, "{not json", "invalid JSON"),
            (SortCategory.VALIDITY, '{"time":{"start":"1965-01-01","end":"1960-01-01"}}', "after end"),
            (SortCategory.VALIDITY, '{"time":{"empty":true,"start":"1960-01-01"}}', "must stand alone"),
            (SortCategory.VALIDITY, '{"when":{}}', "unexpected key"),
            (SortCategory.CAUSALITY, '{"because":[]}', "unexpected key"),
            (SortCategory.SEQUENCE, '{"ordinal":-1}', "natural number"),
            (SortCategory.SEQUENCE, '{"ordinal":true}', "natural number"),
            (SortCategory.PROVENANCE, '{"sources":"wd:Q1"}', "expected a list"),
            (SortCategory.ANNOTATION, '{"wd:P1":"wd:Q1"}', "must map to a list"),
            (SortCategory.ANNOTATION, '{"wd:P1":[42]}', "not a value encoding"),
        ],
    )
    def test_malformed_rejected(self, category: SortCategory, text: str, message: str) -> None:
        with pytest.raises(SortDecodeError, match=message):
            decode_sort(category, text)


# ---------------------------------------------------------------------------
# Randomised round-trips
# ---------------------------------------------------------------------------

ROUNDTRIPS = settings(max_examples=2000, deadline=None)


class TestRoundTrip:
    """decode_sort(encode_sort(v)) == v over generated sort values."""

    @ROUNDTRIPS
    @given(dimensioned_validities())
    def test_validity(self, value: ValidityContext) -> None:
        assert decode_sort(SortCategory.VALIDITY, encode_sort(value)) == value

    @ROUNDTRIPS
    @given(causalities())
    def test_causality(self, value: Causality) -> None:
        assert decode_sort(SortCategory.CAUSALITY, encode_sort(value)) == value

    @ROUNDTRIPS
    @given(sequences())
    def test_sequence(self, value: SequenceNode) -> None:
        assert decode_sort(SortCategory.SEQUENCE, encode_sort(value)) == value

    @ROUNDTRIPS
    @given(annotations())
    def test_annotations(self, value: Annotations) -> None:
        assert decode_sort(SortCategory.ANNOTATION, encode_sort(value)) == value

    @ROUNDTRIPS
    @given(provenances())
    def test_provenance(self, value: Provenance) -> None:
        assert decode_sort(SortCategory.PROVENANCE, encode_sort(value)) == value


class TestSecondPrecision:
    """Instants carry whole seconds; fractions are dropped on the way in."""

    @given(sub_second_moments())
    def test_fraction_does_not_distinguish_intervals(
        self, moments: tuple[datetime, datetime]
    ) -> None:
        whole, fractional = moments
        assert TimeInterval(fractional, None) == TimeInterval(whole, None)
        assert during(None, fractional) == during(None, whole)

    @given(sub_second_moments())
    def test_fractional_interval_roundtrips(self, moments: tuple[datetime, datetime]) -> None:
        value = during(moments[1], None)
        assert decode_sort(SortCategory.VALIDITY, encode_sort(value)) == value

    def test_fractional_lexical_form_truncated(self) -> None:
        decoded = decode_sort(
            SortCategory.VALIDITY, '{"time":{"start":"1960-01-01T00:00:00.5Z"}}'
        )
        assert decoded == during(utc(1960), None)
        assert encode_sort(decoded) == '{"space":{},"time":{"start":"1960-01-01T00:00:00Z"}}'
