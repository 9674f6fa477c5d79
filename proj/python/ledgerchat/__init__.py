"""Python bindings for the ledgerchat core: crypto primitives, the ratchet,
chain verification, the benchmark harness and a loopback stack with clients."""

from ._core import (  # noqa: F401
    BACKUP_MAGIC,
    MIN_BACKUP_ITERATIONS,
    ChainKey,
    Client,
    LedgerchatError,
    MessageKey,
    RemoteNetwork,
    Stack,
    aes_cbc_decrypt_blocks,
    aes_cbc_encrypt_blocks,
    bench_decrypt,
    bench_encrypt,
    derive_master_secret,
    expand_message_key,
    fit_line,
    generate_identity,
    generate_input,
    hkdf,
    hmac_sha256,
    identity_from_private,
    init_chains,
    length_range,
    pbkdf2_hmac_sha256,
    ratchet_forward,
    seal,
    sha256,
    unseal,
    verify_chain_file,
)

__all__ = [name for name in dir() if not name.startswith("_")]
