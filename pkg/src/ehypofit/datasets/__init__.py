"""Datasets bundled with ehypofit."""

from __future__ import annotations

import hashlib
import logging
from importlib import resources
from typing import TYPE_CHECKING

from ehypofit.exceptions import IngestionError
from ehypofit.models import Sample

if TYPE_CHECKING:
    from importlib.resources.abc import Traversable

logger = logging.getLogger(__name__)

BLADDER_CANCER_FILE = "bladder_cancer.csv"
BLADDER_CANCER_COUNT = 128
BLADDER_CANCER_SHA256 = "e4b12214a9e3449654a37af046e5c0038eb502c0e759039d6a6c6b3dd586c1dd"


def bladder_cancer_path() -> Traversable:
    """Location of the bundled bladder-cancer remission times file."""
    return resources.files(__name__) / BLADDER_CANCER_FILE


def load_bladder_cancer() -> Sample:
    """Load the remission times (months) of 128 bladder cancer patients.

    Raises:
        IngestionError: If the bundled file fails its checksum or count check.
    """
    raw = bladder_cancer_path().read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != BLADDER_CANCER_SHA256:
        msg = f"{BLADDER_CANCER_FILE} checksum mismatch: {digest}"
        raise IngestionError(msg)

    values = [float(token) for token in raw.decode("ascii").replace(",", " ").split()]
    if len(values) != BLADDER_CANCER_COUNT:
        msg = f"{BLADDER_CANCER_FILE} holds {len(values)} values, expected {BLADDER_CANCER_COUNT}"
        raise IngestionError(msg)
    logger.debug("loaded %s (%d values, sha256 ok)", BLADDER_CANCER_FILE, len(values))
    return Sample(values=values)
