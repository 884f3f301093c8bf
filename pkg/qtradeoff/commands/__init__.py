from . import check, info, region, sample, scan, verify

COMMANDS = [check, info, scan, region, verify, sample]

__all__ = ["COMMANDS", "check", "info", "scan", "region", "verify", "sample"]
