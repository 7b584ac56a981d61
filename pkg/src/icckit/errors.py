"""
Exceções do icckit

Todas derivam de ValueError, como os erros de validação do restante do
código, de modo que quem captura ValueError também as recebe.
"""

from typing import Optional, Sequence


class IccKitError(ValueError):
    """Erro base do toolkit."""


class DimensionMismatchError(IccKitError):
    """Dimensões incompatíveis entre matrizes, vetores ou geradores."""


class NotUnimodularError(IccKitError):
    """Matriz que deveria estar em GL(n,Z) tem |det| != 1."""


class InvalidSubgroupError(IccKitError):
    """Conjunto de elementos que não é fechado pela operação do grupo."""


class InvalidHomomorphismError(IccKitError):
    """Imagens de geradores que não respeitam as relações da fonte."""


class AutCapExceededError(IccKitError):
    """Ordem do grupo acima do limite configurado para força bruta em Aut."""


class UnsupportedDescriptorError(IccKitError):
    """Descritor fora do catálogo suportado pela operação."""


class SpecFileError(IccKitError):
    """Arquivo de especificação inválido; guarda o caminho da chave culpada."""

    def __init__(self, message: str, key_path: Optional[Sequence] = None):
        self.key_path = tuple(key_path or ())
        location = ".".join(str(part) for part in self.key_path)
        super().__init__(f"{location}: {message}" if location else message)


class WordSyntaxError(IccKitError):
    """Palavra mal formada ou com gerador fora do alfabeto."""
