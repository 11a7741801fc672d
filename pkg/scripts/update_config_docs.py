# Copyright 2021 - 2024 Universität Tübingen, DKFZ, EMBL, and Universität zu Köln
# for the German Human Genome-Phenome Archive (GHGA)
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

"""Generates the config schema, the example config and the report schema of the
verifier (or checks whether these files are up to date).
"""

import json
import sys
from difflib import unified_diff
from pathlib import Path

import typer
import yaml

REPO_ROOT_DIR = Path(__file__).parent.parent.resolve()
SERVICE_DIR = REPO_ROOT_DIR / "services" / "tsv"

dev_config_yaml = SERVICE_DIR / "dev_config.yaml"
config_schema_json = SERVICE_DIR / "config_schema.json"
example_config_yaml = SERVICE_DIR / "example_config.yaml"
report_schema_json = SERVICE_DIR / "report_schema.json"


class ValidationError(RuntimeError):
    """Raised when validation of the generated docs fails."""


def echo_success(message: str):
    """Print a success message."""
    typer.echo(typer.style(text=message, fg=typer.colors.GREEN))


def echo_failure(message: str):
    """Print a failure message."""
    typer.echo(typer.style(text=message, fg=typer.colors.RED))


def get_dev_config():
    """Get the dev config object."""
    from tsv.config import Config

    return Config(config_yaml=dev_config_yaml)  # type: ignore [call-arg]


def get_schema() -> str:
    """Returns a JSON schema generated from the Config class."""
    config = get_dev_config()
    return json.dumps(config.model_json_schema(), indent=2) + "\n"


def get_example() -> str:
    """Returns an example config YAML."""
    config = get_dev_config()
    normalized_config_dict = json.loads(config.model_dump_json())
    return yaml.dump(normalized_config_dict)


def get_report_schema() -> str:
    """Returns the JSON schema of the suite reports."""
    from tsv.adapters.outbound.report_writer import report_schema

    return json.dumps(report_schema(), indent=2) + "\n"


def generated_files() -> dict[Path, str]:
    """Map every documented file to its expected content."""
    return {
        example_config_yaml: get_example(),
        config_schema_json: get_schema(),
        report_schema_json: get_report_schema(),
    }


def update_docs():
    """Write all documentation files."""
    for path, content in generated_files().items():
        path.write_text(content, encoding="utf-8")


def print_diff(expected: str, observed: str):
    """Print differences between expected and observed files."""
    echo_failure("Differences:")
    for line in unified_diff(
        expected.splitlines(keepends=True),
        observed.splitlines(keepends=True),
        fromfile="expected",
        tofile="observed",
    ):
        print("   ", line.rstrip())


def check_docs():
    """Check whether the documentation files are up to date.

    Raises:
        ValidationError: if not up to date.
    """
    for path, expected in generated_files().items():
        observed = path.read_text(encoding="utf-8") if path.exists() else ""
        if expected != observed:
            print_diff(expected, observed)
            raise ValidationError(f"'{path}' is not up to date.")


def main(check: bool = False):
    """Update or check the config and report documentation files."""
    if check:
        try:
            check_docs()
        except ValidationError as error:
            echo_failure(f"Validation failed: {error}")
            sys.exit(1)
        echo_success("Config and report docs are up to date.")
        return

    update_docs()
    echo_success("Successfully updated the config and report docs.")


if __name__ == "__main__":
    typer.run(main)
