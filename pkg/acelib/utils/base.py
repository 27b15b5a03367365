import csv
import hashlib
import json
import math

import numpy as np

import acelib


class RunManifest(object):
    """ Record of how an output file was produced.

    Parameters
    ----------
    command : str
        Name of the command that produced the output.
    params : dict, optional
        Every parameter of the run, defaults included.
    seeds : dict, optional
        Seeds used by the run, by name.
    inputs : list of str, optional
        Paths of the input files, hashed with SHA-256.
    """

    def __init__(self, command, params=None, seeds=None, inputs=()):
        self.command = command
        self.params = dict(params or {})
        self.seeds = dict(seeds or {})
        self.inputs = {path: file_sha256(path) for path in inputs}
        self.version = acelib.__version__

    def to_dict(self):
        return {'command': self.command,
                'params': _jsonable(self.params),
                'seeds': _jsonable(self.seeds),
                'inputs': dict(self.inputs),
                'version': self.version}

    def save(self, output_path):
        """ Writes the manifest next to ``output_path`` and returns its
        path. """
        path = manifest_path(output_path)
        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        return path


def manifest_path(output_path):
    return output_path + '.manifest.json'


def file_sha256(path, chunk_size=1 << 16):
    """ Hex SHA-256 digest of a file. """
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(chunk_size), b''):
            digest.update(chunk)
    return digest.hexdigest()


def format_float(value):
    """ Fixed 9 significant digit rendering used in every CSV.

    None and NaN give an empty field; booleans give 0 or 1.
    """
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return '1' if value else '0'
    if isinstance(value, (int, np.integer)):
        return '%d' % value
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isnan(value):
        return ''
    return '%.9g' % value


def write_csv(rows, path, columns, manifest=None):
    """ Writes dict rows to a CSV file with a fixed column order.

    Parameters
    ----------
    rows : iterable of dict
    path : str
    columns : list of str
        Column order; keys of a row outside it are ignored.
    manifest : RunManifest, optional
        Saved as the ``<path>.manifest.json`` sidecar.
    """
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_float(row.get(c)) for c in columns])

    if manifest is not None:
        manifest.save(path)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, 'to_list'):
        return value.to_list()
    return value
