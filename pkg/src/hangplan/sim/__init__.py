from .contacts import ContactPair, annotate_cloud_contacts, contact_pairs, extract_contacts
from .removal import check_removable
from .scene import Body, HangScene
from .settle import Outcome, SettleConfig, StabilityVerdict, settle

__all__ = [
    "ContactPair", "annotate_cloud_contacts", "contact_pairs",
    "extract_contacts", "check_removable", "Body", "HangScene",
    "Outcome", "SettleConfig", "StabilityVerdict", "settle",
]
