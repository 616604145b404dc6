"""Project XML round-trips and schema strictness."""

from __future__ import annotations

import dataclasses

import pytest

from planforge.pddl import Literal
from planforge.project_xml import SchemaViolation, UnsupportedVersion, export_xml, import_xml
from planforge.workspace import UpsertOperator, apply_edit, check_consistency

from .conftest import read_fixture


def test_roundtrip_d1_project(d1_project):
    assert import_xml(export_xml(d1_project)) == d1_project


def test_frozen_fixture_matches(d1_project):
    text = read_fixture("d1.kavi.xml")
    assert import_xml(text) == d1_project
    assert export_xml(d1_project) == text


def test_roundtrip_preserves_defects(d1_project):
    load = d1_project.operator("load")
    broken = dataclasses.replace(load, preconditions=(Literal("at", ("?pkg",)),))
    project, diagnostics = apply_edit(d1_project, UpsertOperator(broken))
    assert diagnostics  # the defect is present
    restored = import_xml(export_xml(project))
    assert restored == project
    assert check_consistency(restored) == diagnostics


def test_import_other_root():
    with pytest.raises(SchemaViolation):
        import_xml("<other/>")


def test_import_bad_version(d1_project):
    text = export_xml(d1_project).replace('version="1"', 'version="2"')
    with pytest.raises(UnsupportedVersion):
        import_xml(text)


def test_import_unknown_attribute(d1_project):
    text = export_xml(d1_project).replace("<class ", '<class color="red" ')
    with pytest.raises(SchemaViolation) as err:
        import_xml(text)
    assert "color" in str(err.value)


def test_import_unknown_element(d1_project):
    text = export_xml(d1_project).replace("<operators>", "<operators><widget/>")
    with pytest.raises(SchemaViolation) as err:
        import_xml(text)
    assert "kaviProject/operators" in str(err.value)


def test_import_negative_init_rejected(d1_project):
    text = export_xml(d1_project).replace(
        '<init polarity="positive"', '<init polarity="negative"', 1
    )
    with pytest.raises(SchemaViolation):
        import_xml(text)


def test_import_not_xml():
    with pytest.raises(SchemaViolation):
        import_xml("(define (domain d))")


def test_error_paths_name_the_element(d1_project):
    text = export_xml(d1_project).replace('<param name="?pkg" type="package" />',
                                          '<param type="package" />', 1)
    with pytest.raises(SchemaViolation) as err:
        import_xml(text)
    assert "param" in str(err.value)
