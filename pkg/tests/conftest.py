import json
from pathlib import Path

import pytest

from icckit.zlinalg import IntMatrix

ROOT = Path(__file__).resolve().parents[1]
CATALOG = ROOT / "config" / "catalog"


@pytest.fixture
def m_phi() -> IntMatrix:
    return IntMatrix.from_rows([[1, 1], [0, 1]])


@pytest.fixture
def m_psi() -> IntMatrix:
    return IntMatrix.from_rows([[1, 0], [1, 1]])


@pytest.fixture
def catalog_dir() -> Path:
    return CATALOG


@pytest.fixture
def write_spec(tmp_path):
    """Grava um descritor JSON em tmp_path e devolve o caminho."""

    def _write(data, name: str = "spec.json") -> Path:
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
        return path

    return _write
