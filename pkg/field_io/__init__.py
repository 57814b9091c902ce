# field_io: grayscale fields, image files, patches and dataset manifests.

from field_io.field import GrayField, Roi, crop, extract_patches
from field_io.image_io import read_image, read_raw, write_image, write_raw
from field_io.manifest import DatasetManifest, ManifestEntry, load_manifest

__all__ = [
    "GrayField",
    "Roi",
    "crop",
    "extract_patches",
    "read_image",
    "read_raw",
    "write_image",
    "write_raw",
    "DatasetManifest",
    "ManifestEntry",
    "load_manifest",
]
