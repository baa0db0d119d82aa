"""Field search: conjunctive conditions evaluated against object fields.

Supported fields are the Dublin Core element names plus pid, label, cDate
and mDate.  Repeated DC fields match when any value satisfies a condition.
The `has` operator matches the whole value case-insensitively, with `*` as
a wildcard for any run of characters.
"""

from __future__ import annotations

import re

from pubflow.repository.dc import DC_ELEMENTS
from pubflow.repository.errors import UnknownFieldError, UnsupportedOperatorError
from pubflow.repository.model import ObjectFields

OPERATORS = ("eq", "has", "gt", "ge", "lt", "le")
SCALAR_FIELDS = ("pid", "label", "cDate", "mDate")
SEARCH_FIELDS = SCALAR_FIELDS + DC_ELEMENTS

Condition = tuple[str, str, str]


def validate_conditions(conditions: list[Condition]) -> None:
    for field_name, operator, _ in conditions:
        if field_name not in SEARCH_FIELDS:
            raise UnknownFieldError(field_name)
        if operator not in OPERATORS:
            raise UnsupportedOperatorError(operator)


def _field_values(row: ObjectFields, field_name: str) -> tuple[str, ...]:
    if field_name == "pid":
        return (row.pid,)
    if field_name == "label":
        return (row.label,)
    if field_name == "cDate":
        return (row.c_date,)
    if field_name == "mDate":
        return (row.m_date,)
    return row.dc.values_for(field_name)


def _has_pattern(pattern: str) -> re.Pattern[str]:
    parts = (re.escape(p) for p in pattern.split("*"))
    return re.compile("^" + ".*".join(parts) + "$", re.IGNORECASE)


def _compare(value: str, operator: str, operand: str) -> bool:
    if operator == "eq":
        return value == operand
    if operator == "gt":
        return value > operand
    if operator == "ge":
        return value >= operand
    if operator == "lt":
        return value < operand
    if operator == "le":
        return value <= operand
    raise UnsupportedOperatorError(operator)


def matches(row: ObjectFields, conditions: list[Condition]) -> bool:
    for field_name, operator, operand in conditions:
        values = _field_values(row, field_name)
        if operator == "has":
            pattern = _has_pattern(operand)
            if not any(pattern.match(v) for v in values):
                return False
        elif not any(_compare(v, operator, operand) for v in values):
            return False
    return True
