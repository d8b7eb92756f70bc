# app/repositories/base_repository.py
from typing import Dict, Generic, Hashable, List, TypeVar

KeyType = TypeVar("KeyType", bound=Hashable)
ItemType = TypeVar("ItemType")


class BaseRepository(Generic[KeyType, ItemType]):
    """
    Base in-memory repository grouping items under hash keys.
    Extend this class for specific item kinds.
    """

    def __init__(self):
        self._buckets: Dict[KeyType, List[ItemType]] = {}

    def get(self, key: KeyType) -> List[ItemType]:
        """Get every item stored under a key."""
        return list(self._buckets.get(key, ()))

    def list(self) -> List[ItemType]:
        """Get all items in insertion order."""
        return [item for bucket in self._buckets.values() for item in bucket]

    def create(self, key: KeyType, item: ItemType) -> ItemType:
        """Store a new item under a key."""
        self._buckets.setdefault(key, []).append(item)
        return item

    def replace(self, key: KeyType, old: ItemType, new: ItemType) -> ItemType:
        bucket = self._buckets[key]
        bucket[bucket.index(old)] = new
        return new

    def __len__(self) -> int:
        return sum(len(bucket) for bucket in self._buckets.values())
