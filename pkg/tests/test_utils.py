import hashlib
import json
import os
import tempfile
import unittest

import numpy as np

import acelib
from acelib.terrain import Pose2D
from acelib.utils import RunManifest, manifest_path, file_sha256, \
    format_float, write_csv


class FormatFloatTest(unittest.TestCase):
    def test_format_float(self):
        """ Tests the rendering of every kind of CSV field """
        self.assertEqual(format_float(None), '')
        self.assertEqual(format_float(float('nan')), '')
        self.assertEqual(format_float(True), '1')
        self.assertEqual(format_float(np.bool_(False)), '0')
        self.assertEqual(format_float(7), '7')
        self.assertEqual(format_float(np.int64(-3)), '-3')
        self.assertEqual(format_float('safe'), 'safe')
        self.assertEqual(format_float(0.1), '0.1')
        self.assertEqual(format_float(1 / 3), '0.333333333')
        self.assertEqual(format_float(np.float32(0.5)), '0.5')
        self.assertEqual(format_float(1.5e-12), '1.5e-12')


class CsvTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, 'out.csv')

    def tearDown(self):
        self.tmp.cleanup()

    def test_write_csv(self):
        """ Tests the header, the column order and ignored keys """
        rows = [{'b': 2.5, 'a': 'x', 'extra': 1},
                {'a': 'y', 'b': None}]

        write_csv(rows, self.path, ['a', 'b'])

        with open(self.path) as f:
            self.assertEqual(f.read(), "a,b\nx,2.5\ny,\n")
        self.assertFalse(os.path.exists(manifest_path(self.path)))

    def test_manifest(self):
        """ Tests the sidecar written with a CSV """
        source = os.path.join(self.tmp.name, 'input.txt')
        with open(source, 'wb') as f:
            f.write(b'terrain')
        manifest = RunManifest('sweep', {'a': np.float64(0.1),
                                         'pose': Pose2D(1, 2, 0),
                                         'levels': (np.int32(1), 2)},
                               {'seed': 4}, [source])

        write_csv([], self.path, ['a'], manifest)

        with open(manifest_path(self.path)) as f:
            saved = json.load(f)
        self.assertEqual(saved['command'], 'sweep')
        self.assertEqual(saved['params'], {'a': 0.1, 'pose': [1, 2, 0],
                                           'levels': [1, 2]})
        self.assertEqual(saved['seeds'], {'seed': 4})
        self.assertEqual(saved['inputs'],
                         {source: hashlib.sha256(b'terrain').hexdigest()})
        self.assertEqual(saved['version'], acelib.__version__)

    def test_file_sha256(self):
        """ Tests hashing a file larger than a chunk """
        data = os.urandom(3 * 1024 + 17)
        with open(self.path, 'wb') as f:
            f.write(data)

        self.assertEqual(file_sha256(self.path, chunk_size=1024),
                         hashlib.sha256(data).hexdigest())

    def test_missing_input(self):
        """ Tests that a missing input file raises """
        with self.assertRaises(OSError):
            RunManifest('evaluate', inputs=[os.path.join(self.tmp.name,
                                                         'nope.asc')])


def main():
    unittest.main()


if __name__ == '__main__':
    main()
