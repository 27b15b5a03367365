from acelib.oracle.base import settle, settle_constrained, pan_clearance
from acelib.oracle.classes import SettleResult

__all__ = ['settle', 'settle_constrained', 'pan_clearance', 'SettleResult']
