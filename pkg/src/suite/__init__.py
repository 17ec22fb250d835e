"""
Verification suites behind the `verify` subcommand
"""

from .coordinator import VerificationPipeline, diagonal_maximum

__all__ = ['VerificationPipeline', 'diagonal_maximum']
