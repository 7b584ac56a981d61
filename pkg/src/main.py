"""
icckit - Ponto de entrada

Configura os destinos de log (loguru) e delega para icckit.cli.

Instruções para personalização:
1. Configure as variáveis de ambiente no arquivo .env
2. ICCKIT_LOG_LEVEL controla o nível no stderr (padrão WARNING)
3. ICCKIT_LOG_FILE ativa o log em arquivo com rotação diária
"""

import sys

from loguru import logger

from icckit.cli import main
from icckit.settings import load_settings

# Configuração do logger: stdout fica reservado para os relatórios
settings = load_settings()
logger.remove()
logger.add(sys.stderr, level=settings["log_level"])
if settings["log_file"]:
    logger.add(settings["log_file"], rotation="1 day", retention="30 days")


if __name__ == "__main__":
    sys.exit(main())
