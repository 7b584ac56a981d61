"""
icckit - Decisão da propriedade icc (classes de conjugação infinitas)

Este pacote contém os módulos principais para:
- Álgebra linear inteira exata (Smith, Hermite, núcleo inteiro, FC em reticulados)
- Grupos finitos, palavras e formas normais (Britton em BS(m,n))
- Extensões cindidas com núcleo reticulado ou declarado
- Decisores por família (wreath, extensões finitas, HNN, amálgamas, produtos livres)
- Oráculo de força bruta sobre bolas de conjugados

Módulos:
- zlinalg: Aritmética matricial inteira
- groupkit: Grupos finitos, Aut, palavras, BS(m,n), FC(Q)
- extensions: Decisores de extensões cindidas e cociclos
- families: Despacho por família do catálogo
- oracle: Enumeração de conjugados e verificação cruzada
- spec_loader: Arquivos JSON de descritores
- cli: Linha de comando
"""

__version__ = "1.0.0"
__author__ = "icckit"

from .extensions import ExtensionEngine, extension_engine
from .families import FamilyEngine, family_engine
from .oracle import OracleEngine, oracle_engine
from .spec_loader import parse_spec, serialize_desc
from .verdict import Outcome, Verdict

__all__ = [
    "ExtensionEngine",
    "FamilyEngine",
    "OracleEngine",
    "extension_engine",
    "family_engine",
    "oracle_engine",
    "parse_spec",
    "serialize_desc",
    "Outcome",
    "Verdict",
]
