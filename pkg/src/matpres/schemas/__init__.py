"""Published JSON schemas for reports and certificates."""

import json
from importlib import resources

NAMES = ("report", "certificate")


def load(name: str) -> dict:
    if name not in NAMES:
        raise ValueError(f"unknown schema {name!r}")
    return json.loads(resources.files(__name__).joinpath(f"{name}.schema.json").read_text())


def validator(name: str):
    """A jsonschema validator with cross-references resolved (needs the ``jsonschema`` package)."""
    import jsonschema
    from referencing import Registry, Resource

    reg = Registry().with_resources(
        (f"matpres/{n}.schema.json", Resource.from_contents(load(n))) for n in NAMES)
    schema = load(name)
    return jsonschema.Draft202012Validator(schema, registry=reg)
