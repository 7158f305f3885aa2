from .app import ModelRegistry, create_app
from .store import ManifestStore, atomic_write_text, version_token

__all__ = ["ManifestStore", "ModelRegistry", "atomic_write_text", "create_app", "version_token"]
