from .checks import CrossCheck, CrossCheckAudit, IdentityAudit, cross_check, cross_check_audit, identity_audit
from .cli import ALL_AUDITS, HANDLERS, SUBCOMMANDS, add_subcommands, build_parser, execute, run
from .manifest import RunManifest, manifest_digest
from .options import load_config_file, parse_grid, resolve
from .selftest import CHECK_ORDER, SELFTEST_SEED, SelftestResult, SelftestRow, run_selftest

__all__ = [
    'ALL_AUDITS',
    'CHECK_ORDER',
    'CrossCheck',
    'CrossCheckAudit',
    'HANDLERS',
    'IdentityAudit',
    'RunManifest',
    'SELFTEST_SEED',
    'SUBCOMMANDS',
    'SelftestResult',
    'SelftestRow',
    'add_subcommands',
    'build_parser',
    'cross_check',
    'cross_check_audit',
    'execute',
    'identity_audit',
    'load_config_file',
    'manifest_digest',
    'parse_grid',
    'resolve',
    'run',
    'run_selftest',
]
