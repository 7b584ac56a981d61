"""
Interface de linha de comando do icckit

Subcomandos:
    icckit decide <arquivo> [--json] [--check] [--radius R] [--timestamps]
    icckit oracle <arquivo> --element <palavra> [--radius R] [--csv | --json]
    icckit explain <arquivo> [--check] [--radius R]
    icckit batch <diretório> [--json] [--check] [--radius R] [--jobs N]

Códigos de saída: 0 icc, 1 not_icc, 2 unknown, 3 erro, 4 verificação cruzada inconsistente.
"""

import argparse
import json
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from joblib import Parallel, delayed
from loguru import logger

from . import __version__
from .descriptors import GroupDesc, describe
from .errors import IccKitError
from .families import family_engine
from .oracle import BallReport, oracle_engine
from .spec_loader import parse_spec
from .verdict import CLAUSE_TEXT, Outcome, Verdict

EXIT_ICC = 0
EXIT_NOT_ICC = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3
EXIT_INCONSISTENT = 4

EXIT_CODES = {
    Outcome.ICC: EXIT_ICC,
    Outcome.NOT_ICC: EXIT_NOT_ICC,
    Outcome.UNKNOWN: EXIT_UNKNOWN,
}


# ----------------------------------------------------------------------
# Operações
# ----------------------------------------------------------------------
def run_decide(desc: GroupDesc, check: bool = False, radius: Optional[int] = None) -> Tuple[Verdict, int]:
    """
    Decide o descritor e, com check, confronta o veredito com o oráculo.

    Returns:
        Tuple[Verdict, int]: veredito (com registro do oráculo) e código de saída
    """
    verdict = family_engine.dispatch_decide(desc)
    code = EXIT_CODES[verdict.outcome]
    if check:
        record = oracle_engine.cross_check(desc, verdict, radius)
        verdict = verdict.with_oracle(record)
        if record.status == "inconsistent":
            logger.error(f"Verificação cruzada inconsistente para {describe(desc)}: {record.message}")
            code = EXIT_INCONSISTENT
    return verdict, code


def run_oracle(desc: GroupDesc, element: str, radius: Optional[int] = None) -> BallReport:
    group = oracle_engine.group_for(desc)
    return oracle_engine.ball_conjugates(group, group.parse(element), radius)


def build_report(desc: GroupDesc, verdict: Verdict, timestamps: bool = False) -> Dict[str, Any]:
    report = verdict.to_dict()
    report["descriptor"] = describe(desc)
    report["toolkit_version"] = __version__
    if timestamps:
        report["timestamp"] = datetime.now().isoformat()
    return report


def dump_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2)


def _mark(holds: Optional[bool]) -> str:
    return {True: "sim", False: "não", None: "?"}[holds]


def explain(desc: GroupDesc, verdict: Verdict) -> str:
    """Explicação em prosa: cada cláusula avaliada com sua redação e resultado."""
    lines = [f"Grupo: {describe(desc)}", f"Veredito: {verdict.outcome.value}"]
    if verdict.reason:
        lines.append(f"Motivo: {verdict.reason}")
    lines.append("Condições:")
    for c in verdict.conditions:
        lines.append(f"  [{c.clause.value}] {CLAUSE_TEXT[c.clause]}: {_mark(c.holds)}")
        if c.detail:
            lines.append(f"      {c.detail}")
    if verdict.witness is not None:
        w = verdict.witness
        size = f", classe de tamanho {w.class_size}" if w.class_size is not None else ""
        lines.append(f"Testemunha: {w.element} ({w.kind.value}{size}) {w.detail}".rstrip())
    if verdict.oracle is not None:
        o = verdict.oracle
        lines.append(f"Oráculo: {o.status} (raio {o.budget}) {o.message}".rstrip())
        for p in o.probes:
            state = "fechada" if p.closed else "em crescimento"
            lines.append(f"  {p.element}: {list(p.counts)} {state}")
    return "\n".join(lines)


def summary(desc: GroupDesc, verdict: Verdict) -> str:
    fired = ", ".join(f"{c.clause.value}={_mark(c.holds)}" for c in verdict.conditions)
    line = f"{describe(desc)}: {verdict.outcome.value} [{fired}]"
    if verdict.witness is not None:
        line += f" testemunha {verdict.witness.element}"
    if verdict.oracle is not None:
        line += f" oráculo {verdict.oracle.status}"
    return line


def _batch_item(path: str, check: bool, radius: Optional[int]) -> Dict[str, Any]:
    """Um arquivo do lote, isolado: erros viram linha com código 3."""
    name = Path(path).name
    try:
        desc = parse_spec(path)
        verdict, code = run_decide(desc, check, radius)
        return {
            "file": name,
            "descriptor": describe(desc),
            "verdict": verdict.outcome.value,
            "exit_code": code,
            "witness": verdict.witness.element if verdict.witness is not None else "",
            "oracle": verdict.oracle.status if verdict.oracle is not None else "",
            "error": "",
        }
    except IccKitError as e:
        return {"file": name, "descriptor": "", "verdict": "", "exit_code": EXIT_ERROR,
                "witness": "", "oracle": "", "error": str(e)}


def run_batch(directory: Path, check: bool = False, radius: Optional[int] = None, jobs: int = 1) -> pd.DataFrame:
    """
    Decide todo *.json do diretório, em ordem de nome de arquivo.

    Com jobs > 1 os arquivos são processados em paralelo; a ordem do resultado
    continua a dos nomes.
    """
    files = sorted(str(p) for p in Path(directory).glob("*.json"))
    if not files:
        raise IccKitError(f"Nenhum arquivo .json em {directory}")
    if jobs > 1:
        rows = Parallel(n_jobs=jobs)(delayed(_batch_item)(f, check, radius) for f in files)
    else:
        rows = [_batch_item(f, check, radius) for f in files]
    return pd.DataFrame(rows, columns=["file", "descriptor", "verdict", "exit_code", "witness", "oracle", "error"])


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="icckit", description="Decisão da propriedade icc em famílias de grupos")
    parser.add_argument("--version", action="version", version=f"icckit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    decide = sub.add_parser("decide", help="Decide se o grupo do arquivo é icc")
    decide.add_argument("file", help="Arquivo JSON com o descritor")
    decide.add_argument("--json", action="store_true", help="Relatório JSON")
    decide.add_argument("--check", action="store_true", help="Confronta o veredito com o oráculo")
    decide.add_argument("--radius", type=int, help="Raio do oráculo (padrão ICCKIT_ORACLE_RADIUS)")
    decide.add_argument("--timestamps", action="store_true", help="Inclui data e hora no relatório")

    oracle = sub.add_parser("oracle", help="Conjugados de um elemento por raio")
    oracle.add_argument("file", help="Arquivo JSON com o descritor")
    oracle.add_argument("--element", default="", help="Palavra, ex.: t*a^2*t^-1 (vazio = identidade)")
    oracle.add_argument("--radius", type=int, help="Raio máximo")
    fmt = oracle.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true", help="Saída CSV (radius,count)")
    fmt.add_argument("--json", action="store_true", help="Saída JSON")

    explain_cmd = sub.add_parser("explain", help="Explica em prosa quais condições decidiram")
    explain_cmd.add_argument("file", help="Arquivo JSON com o descritor")
    explain_cmd.add_argument("--check", action="store_true", help="Inclui a verificação cruzada")
    explain_cmd.add_argument("--radius", type=int, help="Raio do oráculo")

    batch = sub.add_parser("batch", help="Decide todos os arquivos .json de um diretório")
    batch.add_argument("directory", help="Diretório com descritores")
    batch.add_argument("--json", action="store_true", help="Lista JSON em vez de tabela")
    batch.add_argument("--check", action="store_true", help="Confronta cada veredito com o oráculo")
    batch.add_argument("--radius", type=int, help="Raio do oráculo")
    batch.add_argument("--jobs", type=int, default=1, help="Processos em paralelo")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "decide":
            desc = parse_spec(args.file)
            verdict, code = run_decide(desc, args.check, args.radius)
            if args.json:
                print(dump_json(build_report(desc, verdict, args.timestamps)))
            else:
                print(summary(desc, verdict))
            return code

        if args.command == "explain":
            desc = parse_spec(args.file)
            verdict, code = run_decide(desc, args.check, args.radius)
            print(explain(desc, verdict))
            return code

        if args.command == "oracle":
            desc = parse_spec(args.file)
            report = run_oracle(desc, args.element, args.radius)
            if args.csv:
                print(report.to_frame().to_csv(index=False), end="")
            elif args.json:
                print(dump_json({**report.to_dict(), "toolkit_version": __version__}))
            else:
                state = "fechado (classe completa)" if report.closed else "não fechado"
                print(f"{report.element}: contagens {list(report.counts)} até o raio {report.radius}, {state}")
            return EXIT_ICC

        frame = run_batch(Path(args.directory), args.check, args.radius, args.jobs)
        if args.json:
            rows: List[Dict[str, Any]] = json.loads(frame.to_json(orient="records"))
            print(dump_json({"results": rows, "toolkit_version": __version__}))
        else:
            print(frame.to_string(index=False))
        if (frame["exit_code"] == EXIT_INCONSISTENT).any():
            return EXIT_INCONSISTENT
        if (frame["exit_code"] == EXIT_ERROR).any():
            return EXIT_ERROR
        return EXIT_ICC

    except IccKitError as e:
        logger.error(f"Erro: {str(e)}")
        print(f"erro: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
