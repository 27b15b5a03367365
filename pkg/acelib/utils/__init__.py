from acelib.utils.base import RunManifest, manifest_path, file_sha256, \
    format_float, write_csv

__all__ = ['RunManifest', 'manifest_path', 'file_sha256', 'format_float',
           'write_csv']
