"""
CLI module
Command-line front end: verify, risk, sweep and appendix
"""
from .commands import COMMANDS, build_sweep_spec, cmd_appendix, cmd_risk, cmd_sweep, cmd_verify
from .config import AppendixConfig, ExperimentConfig, RiskConfig, SweepConfig, VerifyConfig
from .main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, build_parser, main

__all__ = [
    'COMMANDS',
    'build_sweep_spec',
    'cmd_appendix',
    'cmd_risk',
    'cmd_sweep',
    'cmd_verify',
    'AppendixConfig',
    'ExperimentConfig',
    'RiskConfig',
    'SweepConfig',
    'VerifyConfig',
    'EXIT_FAILURE',
    'EXIT_OK',
    'EXIT_USAGE',
    'build_parser',
    'main'
]
