from subset_approx.models import (
    AggregateRow,
    BranchReport,
    ErrorRecord,
    ExperimentConfig,
    IntersectivityReport,
    RunRecord,
    SchemaOutcome,
)
from pydantic.json_schema import models_json_schema
import yaml
import os

REPORT_MODELS = [
    RunRecord,
    AggregateRow,
    ErrorRecord,
    BranchReport,
    IntersectivityReport,
    SchemaOutcome,
    ExperimentConfig,
]


def report_schema(models=REPORT_MODELS) -> dict:
    _, schemas = models_json_schema(
        [(model, "serialization") for model in models],
        ref_template="#/components/schemas/{model}",
    )
    return {
        "title": "subset-approx report stream",
        "components": {"schemas": schemas.get("$defs", {})},
    }


def write_report_schema(schema, schema_file=None):
    if schema_file is None:
        schema_file = os.path.join(os.getcwd(), "subset_approx/report_schema.yml")

    with open(schema_file, "w") as f:
        f.write(yaml.dump(schema, sort_keys=False))


if __name__ == "__main__":
    write_report_schema(report_schema())
