# lasserre/app/crud/__init__.py

from app.crud.base import CRUDBase, read_model, write_canonical
from app.crud.stores import instance_store, oracle_store, record_store

__all__ = [
    "CRUDBase",
    "read_model",
    "write_canonical",
    "instance_store",
    "oracle_store",
    "record_store",
]
