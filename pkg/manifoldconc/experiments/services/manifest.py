"""
Run manifests.

The manifest hash covers what determines the numbers: subcommand, resolved
configuration, seed and tool version. Timestamps, thread counts and output
paths are recorded but not hashed.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from manifoldconc import __version__

logger = logging.getLogger(__name__)

MANIFEST_FILE = 'manifest.json'

# Recorded in the manifest, excluded from the hash
UNHASHED_KEYS = ('threads', 'out', 'config')


def _now():
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


def hashed_config(config):
    return {key: value for key, value in sorted(config.items()) if key not in UNHASHED_KEYS}


def manifest_digest(subcommand, config, seed, version=__version__):
    payload = {
        'subcommand': subcommand,
        'config': hashed_config(config),
        'seed': seed,
        'version': version,
    }
    text = json.dumps(payload, sort_keys=True, separators=(',', ':'), default=str)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    config: dict
    seed: Optional[int]
    version: str = __version__
    outputs: list = field(default_factory=list)
    started: str = field(default_factory=_now)
    finished: Optional[str] = None
    exit_code: Optional[int] = None

    @property
    def digest(self):
        return manifest_digest(self.subcommand, self.config, self.seed, self.version)

    @property
    def short(self):
        return self.digest[:12]

    def run_directory(self, root):
        return Path(root) / f'{self.subcommand}-{self.short}'

    def record(self, path):
        self.outputs.append(str(path))
        return path

    def as_dict(self):
        return {
            'hash': self.digest,
            'subcommand': self.subcommand,
            'config': self.config,
            'seed': self.seed,
            'version': self.version,
            'outputs': list(self.outputs),
            'started': self.started,
            'finished': self.finished,
            'exit_code': self.exit_code,
        }

    def finish(self, directory, exit_code):
        """Stamp the end time and write manifest.json into ``directory``."""
        self.finished = _now()
        self.exit_code = exit_code
        path = Path(directory) / MANIFEST_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.as_dict(), indent=2, sort_keys=True, default=str) + '\n')
        logger.info('Run %s finished with exit code %d; manifest at %s', self.short, exit_code, path)
        return path
