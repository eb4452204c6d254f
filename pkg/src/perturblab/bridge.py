"""Client adapter that satisfies ModelContract over a subprocess.

Wire protocol: one JSON object per line on stdin/stdout, UTF-8. Every
request carries a unique id; the server answers each request exactly
once, in order, with either a payload or an in-band error. The schema
version travels in the info handshake.

Ops: info, spans, embed, forward, mc_forward, gradient, hotflip_scores.
forward/gradient evaluate at caller-supplied embedding matrices so the
saliency methods can probe off-manifold points (noisy or interpolated
embeddings); embed maps words to their token embeddings.
"""

from __future__ import annotations

import json
import subprocess
from typing import Sequence

import numpy as np

PROTOCOL_VERSION = 1


class BridgeError(RuntimeError):
    pass


class BridgeModel:
    def __init__(self, proc: subprocess.Popen) -> None:
        self._proc = proc
        self._next_id = 0
        info = self._call("info")
        if info.get("protocol_version") != PROTOCOL_VERSION:
            raise BridgeError(
                f"server speaks protocol {info.get('protocol_version')}, "
                f"client needs {PROTOCOL_VERSION}"
            )
        self._num_classes = int(info["num_classes"])
        self._embedding_dim = int(info["embedding_dim"])
        self._guided = bool(info.get("guided", False))
        self.max_length = int(info.get("max_length", 0))
        self.model_name = info.get("model_name", "")

    @classmethod
    def spawn(cls, cmd: list[str]) -> "BridgeModel":
        proc = subprocess.Popen(
            cmd,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            bufsize=1,
        )
        return cls(proc)

    # --- wire ---

    def _call(self, op: str, **fields) -> dict:
        if self._proc.poll() is not None:
            raise BridgeError(f"bridge process exited with code {self._proc.returncode}")
        request_id = self._next_id
        self._next_id += 1
        message = {"id": request_id, "op": op, **fields}
        try:
            self._proc.stdin.write(json.dumps(message) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise BridgeError(f"bridge stdin closed: {exc}") from exc
        line = self._proc.stdout.readline()
        if not line:
            raise BridgeError(
                f"bridge closed its stdout mid-request (exit code {self._proc.poll()})"
            )
        response = json.loads(line)
        if response.get("id") != request_id:
            raise BridgeError(
                f"response id {response.get('id')} does not match request {request_id}"
            )
        if "error" in response:
            raise BridgeError(f"bridge error for op {op!r}: {response['error']}")
        return response["payload"]

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
                self._proc.wait(timeout=5)
            except Exception:
                self._proc.kill()

    def __enter__(self) -> "BridgeModel":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # --- ModelContract ---

    @property
    def num_classes(self) -> int:
        return self._num_classes

    @property
    def embedding_dim(self) -> int:
        return self._embedding_dim

    @property
    def supports_guided(self) -> bool:
        return self._guided

    def token_spans(self, words: Sequence[str]) -> list[tuple[int, int]]:
        payload = self._call("spans", words=list(words))
        return [(int(s), int(e)) for s, e in payload["spans"]]

    def embed_words(self, words: Sequence[str]) -> np.ndarray:
        payload = self._call("embed", words=list(words))
        return np.asarray(payload["embeddings"], dtype=np.float64)

    def forward(self, embeddings: np.ndarray) -> np.ndarray:
        payload = self._call(
            "forward", embeddings=np.asarray(embeddings, dtype=np.float64).tolist()
        )
        return np.asarray(payload["logits"], dtype=np.float64)

    def gradient(
        self, embeddings: np.ndarray, target_class: int, mode: str = "standard"
    ) -> np.ndarray:
        payload = self._call(
            "gradient",
            embeddings=np.asarray(embeddings, dtype=np.float64).tolist(),
            target_class=int(target_class),
            gradient_mode=mode,
        )
        return np.asarray(payload["gradients"], dtype=np.float64)

    def mc_softmax(self, words: Sequence[str], T: int, seed: int) -> np.ndarray:
        payload = self._call("mc_forward", words=list(words), T=int(T), seed=int(seed))
        return np.asarray(payload["softmaxes"], dtype=np.float64)

    def hotflip_scores(self, words: Sequence[str], gold_label: int) -> np.ndarray:
        payload = self._call(
            "hotflip_scores", words=list(words), target_class=int(gold_label)
        )
        return np.asarray(payload["scores"], dtype=np.float64)
