"""
Scenario configs, dispatch and artifact export for the command-line runner.
"""

from scenarios.config_parser import KINDS, Scenario, parse_config, scenario_from_dict, scenario_to_dict
from scenarios.exporter import MANIFEST_NAME, ArtifactExporter, read_csv_artifact, read_csv_header
from scenarios.runner import HANDLERS, RunResult, run
