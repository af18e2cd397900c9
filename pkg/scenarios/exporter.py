"""
Artifact writer for scenario runs.

CSV files start with '# key: value' header lines echoing the tool, version,
alpha, beta, grid and scheme, followed by a pandas table in scientific
notation with 17 significant digits. No timestamps are written, so equal
inputs give byte-identical files.
"""

import hashlib
import json
import logging
import os
from typing import Any, Dict, List, Optional

import pandas as pd

from config.settings import CSV_FLOAT_FORMAT, TOOL_NAME, TOOL_VERSION

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'MANIFEST.json'


def _header_value(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return str(value)


class ArtifactExporter:
    """Writes CSV and JSON artifacts into one exclusive output directory."""

    def __init__(self, out_dir: str, header: Optional[Dict[str, Any]] = None):
        self.out_dir = out_dir
        self.header = {'tool': TOOL_NAME, 'version': TOOL_VERSION, **(header or {})}
        self.files: List[str] = []
        os.makedirs(out_dir, exist_ok=True)

    def _path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def _register(self, name: str):
        if name not in self.files:
            self.files.append(name)

    def export_frame(self, frame: pd.DataFrame, name: str, extra_header: Optional[Dict[str, Any]] = None) -> str:
        """
        Export a DataFrame as a header-annotated CSV.

        Args:
            frame (pd.DataFrame): Table to write
            name (str): File name inside the output directory
            extra_header (dict): Additional header entries for this file

        Returns:
            str: Path to the written file
        """
        path = self._path(name)
        header = dict(self.header, **(extra_header or {}))
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            for key, value in header.items():
                handle.write(f"# {key}: {_header_value(value)}\n")
            frame.to_csv(handle, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
        self._register(name)
        logger.info(f"Exported {len(frame)} rows to {path}")
        return path

    def export_rows(self, rows: List[Dict[str, Any]], name: str,
                    extra_header: Optional[Dict[str, Any]] = None) -> str:
        return self.export_frame(pd.DataFrame(rows), name, extra_header)

    def export_json(self, payload: Dict[str, Any], name: str, with_header: bool = True) -> str:
        path = self._path(name)
        document = {'header': self.header, **payload} if with_header else payload
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            json.dump(document, handle, indent=2, sort_keys=True, allow_nan=True)
            handle.write('\n')
        self._register(name)
        logger.info(f"Exported {name} to {path}")
        return path

    def write_manifest(self) -> str:
        """MANIFEST.json: the run header plus size and sha256 of every file written so far."""
        entries = []
        for name in sorted(self.files):
            with open(self._path(name), 'rb') as handle:
                content = handle.read()
            entries.append({'file': name, 'bytes': len(content), 'sha256': hashlib.sha256(content).hexdigest()})
        path = self._path(MANIFEST_NAME)
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            json.dump({**self.header, 'files': entries}, handle, indent=2, sort_keys=True)
            handle.write('\n')
        return path


def read_csv_artifact(path: str) -> pd.DataFrame:
    """Read a CSV artifact, skipping its header lines."""
    return pd.read_csv(path, comment='#')


def read_csv_header(path: str) -> Dict[str, str]:
    header = {}
    with open(path, 'r', encoding='utf-8') as handle:
        for line in handle:
            if not line.startswith('# '):
                break
            key, _, value = line[2:].rstrip('\n').partition(': ')
            header[key] = value
    return header
