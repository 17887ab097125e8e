import hashlib
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List

from rest_framework import serializers

import app
from core.reports import render_document


logger = logging.getLogger(__name__)

MANIFEST_VERSION = 1


@dataclass
class RunManifest:
    """Inputs, parameters and outputs of one command run"""
    command: str
    input_digests: Dict[str, str] = field(default_factory=dict)
    parameters: Dict[str, object] = field(default_factory=dict)
    tool_version: str = app.__version__
    outputs: List[str] = field(default_factory=list)


class RunManifestSerializer(serializers.Serializer):
    """Serializer for run manifests"""
    command = serializers.CharField()
    input_digests = serializers.DictField(child=serializers.CharField())
    parameters = serializers.DictField()
    tool_version = serializers.CharField()
    outputs = serializers.ListField(child=serializers.CharField())


def file_digest(path):
    """SHA-256 of a file's content"""
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for chunk in iter(lambda: handle.read(65536), b''):
            digest.update(chunk)
    return digest.hexdigest()


def build_manifest(command, inputs, parameters, outputs):
    """Collect digests for every existing input path, keyed as given"""
    return RunManifest(
        command=command,
        input_digests={
            path: file_digest(path)
            for path in inputs if path and os.path.isfile(path)
        },
        parameters={
            key: value if isinstance(value, (int, float, bool)) or
            value is None else str(value)
            for key, value in sorted(parameters.items())
        },
        outputs=[os.path.basename(path) for path in outputs],
    )


def write_manifest(manifest, path):
    body = RunManifestSerializer(manifest).data
    with open(path, 'wb') as handle:
        handle.write(render_document('manifest', MANIFEST_VERSION, body))
    logger.info('Wrote manifest %s', path)
    return path
