"""Offline STO-3G fixture generator (FCIDUMP files + RHF/FCI references)."""
