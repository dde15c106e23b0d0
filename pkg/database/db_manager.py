"""
File: database/db_manager.py
Location: tautcheck/database/db_manager.py
Purpose: File-backed store manager for line-oriented caches (atomic writes)
"""

import os
import tempfile
from contextlib import contextmanager
import logging

logger = logging.getLogger(__name__)


class CacheFileManager:
    """
    Manager for one plain-text cache file

    Features:
    - Context manager for reading (missing file reads as empty)
    - Atomic replacement on write (temp file + os.replace)
    - Parent directory creation
    - File size reporting

    Reusable: YES
    """

    def __init__(self, path='correlators.cache'):
        self.path = os.path.abspath(path)

    def exists(self) -> bool:
        return os.path.exists(self.path)

    @contextmanager
    def get_reader(self):
        """
        Context manager yielding an iterator over the file's lines
        A missing file behaves like an empty one
        """
        if not self.exists():
            yield iter(())
            return

        f = open(self.path, 'r', encoding='utf-8')
        try:
            yield f
        finally:
            f.close()

    @contextmanager
    def get_writer(self):
        """
        Context manager for an atomic rewrite of the whole file
        The target is replaced only if the block finishes without error
        """
        directory = os.path.dirname(self.path) or '.'
        os.makedirs(directory, exist_ok=True)

        fd, tmp_path = tempfile.mkstemp(prefix='.tmp-', dir=directory)
        f = os.fdopen(fd, 'w', encoding='utf-8', newline='\n')
        try:
            yield f
            f.close()
            os.replace(tmp_path, self.path)
        except BaseException:
            f.close()
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise

    def get_file_size(self):
        """
        Get cache file size in KB

        Returns:
            float: size in kilobytes (0.0 when the file does not exist)
        """
        if not self.exists():
            return 0.0
        return os.path.getsize(self.path) / 1024
