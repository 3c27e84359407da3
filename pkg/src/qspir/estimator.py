"""scikit-learn style wrapper around the retrieval protocols.

``fit`` stores a file set (the servers' replicated database); ``predict``
runs one private retrieval per requested index. There is nothing to learn,
so this is a thin convenience layer over ``run_qspir`` and
``run_classical_baseline``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import _validation as _v
from .protocols import BACKENDS, ProtocolConfig, run_classical_baseline, run_qspir

__all__ = ["QSPIRRetriever"]


class QSPIRRetriever(BaseEstimator):
    """Retrieve files privately from ``n_servers`` replicated servers.

    Parameters
    ----------
    n_servers : int
        Number of servers N (at least 2).
    protocol : {"qspir", "classical"}
    backend : {"frame", "dense"}
    random_state : int or None
        Seeds the queries and measurement outcomes of each ``predict`` call.

    Attributes
    ----------
    files_ : ndarray of shape (n_files, n_blocks)
        Per-block labels ``2a + b`` of the stored files.
    transcripts_ : list
        One ``ProtocolTranscript`` per index of the last ``predict`` call.
    """

    def __init__(self, n_servers: int = 3, protocol: str = "qspir", backend: str = "frame", random_state=0):
        self.n_servers = n_servers
        self.protocol = protocol
        self.backend = backend
        self.random_state = random_state

    def fit(self, X, y=None):
        """Store the file array ``X`` of shape ``(n_files, n_blocks)``, entries in 0..3."""
        _v.check_int(self.n_servers, "n_servers", 2)
        _v.check_choice(self.protocol, "protocol", ("qspir", "classical"))
        _v.check_choice(self.backend, "backend", BACKENDS)
        self.files_ = _v.check_file_array(X)
        self.n_files_, self.n_blocks_ = self.files_.shape
        return self

    def predict(self, K):
        """Retrieve file ``k`` (1-based) for every ``k`` in ``K``.

        Returns an int array of shape ``(len(K), n_blocks)``.
        """
        check_is_fitted(self, "files_")
        ks = np.atleast_1d(np.asarray(K))
        if ks.ndim != 1 or not np.issubdtype(ks.dtype, np.integer):
            raise ValueError("K must be a 1-D sequence of integer file indices")
        rng = np.random.default_rng(self.random_state)
        files = tuple(self.files_)
        out = np.empty((len(ks), self.n_blocks_), dtype=np.int64)
        self.transcripts_ = []
        for row, k in enumerate(ks):
            config = ProtocolConfig(
                self.n_servers,
                self.n_files_,
                self.n_blocks_,
                int(k),
                files,
                backend=self.backend,
                rng_seed=int(rng.integers(2**32)),
            )
            t = run_classical_baseline(config) if self.protocol == "classical" else run_qspir(config)[0]
            self.transcripts_.append(t)
            out[row] = t.output.to_ints()
        return out

    def score(self, K, y=None) -> float:
        """Fraction of indices in ``K`` whose retrieved file matches the stored one."""
        pred = self.predict(K)
        truth = self.files_[np.atleast_1d(np.asarray(K)) - 1]
        return float(np.mean(np.all(pred == truth, axis=1)))

    @property
    def rate_(self):
        check_is_fitted(self, "transcripts_")
        return self.transcripts_[0].rate
