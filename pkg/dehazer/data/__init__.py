from ._io import load_image, save_image, load_map, save_map, decode_ppm, encode_ppm
from ._synthesis import (
    Extent,
    as_extent,
    random_transmission_field,
    random_airlight,
    synthesize_haze,
    procedural_scene,
)
from ._dataset import (
    HazePair,
    Dataset,
    DatasetManifest,
    make_pair,
    make_dataset,
    write_dataset,
    read_dataset,
    MANIFEST_NAME,
)
from ._augment import (
    CutoutSpec,
    AugmentSpec,
    AUGMENTATION_SETTINGS,
    augmentation_setting,
    crop_pair,
    hflip_pair,
    cutout_pair,
    augment,
    mosaic4,
)

__all__ = [
    "load_image",
    "save_image",
    "load_map",
    "save_map",
    "decode_ppm",
    "encode_ppm",
    "Extent",
    "as_extent",
    "random_transmission_field",
    "random_airlight",
    "synthesize_haze",
    "procedural_scene",
    "HazePair",
    "Dataset",
    "DatasetManifest",
    "make_pair",
    "make_dataset",
    "write_dataset",
    "read_dataset",
    "MANIFEST_NAME",
    "CutoutSpec",
    "AugmentSpec",
    "AUGMENTATION_SETTINGS",
    "augmentation_setting",
    "crop_pair",
    "hflip_pair",
    "cutout_pair",
    "augment",
    "mosaic4",
]
