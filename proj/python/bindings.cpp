#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>

#include "ledgerchat/client/session.hpp"
#include "ledgerchat/crypto/crypto.hpp"
#include "ledgerchat/crypto/primitives.hpp"
#include "ledgerchat/harness/bench.hpp"
#include "ledgerchat/harness/stack.hpp"
#include "ledgerchat/pki/chain.hpp"
#include "ledgerchat/wire/remote.hpp"

namespace py = pybind11;
using namespace ledgerchat;

namespace {

py::bytes ToPy(ByteView b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

Bytes FromPy(const py::bytes& b) {
  std::string_view s = b;
  return Bytes(s.begin(), s.end());
}

template <std::size_t N>
ByteArray<N> ArrayFromPy(const py::bytes& b, const char* what) {
  std::string_view s = b;
  if (s.size() != N) {
    throw Error(ErrorCode::kArgument, std::string(what) + " must be " + std::to_string(N) +
                                          " bytes, got " + std::to_string(s.size()));
  }
  ByteArray<N> out{};
  std::copy(s.begin(), s.end(), out.begin());
  return out;
}

py::dict RecordToDict(const harness::BenchRecord& r) {
  py::dict d;
  d["input_length"] = r.input_length;
  d["encrypt_us"] = r.encrypt_us;
  d["mac_us"] = r.mac_us;
  d["total_encrypt_us"] = r.total_encrypt_us;
  d["decrypt_us"] = r.decrypt_us;
  d["mac_verify_us"] = r.mac_verify_us;
  d["total_decrypt_us"] = r.total_decrypt_us;
  d["repetitions"] = r.repetitions;
  return d;
}

py::dict PollItemToDict(const client::PollItem& item) {
  py::dict d;
  d["seq"] = item.seq;
  d["sender"] = item.envelope.sender_id;
  d["group"] = item.envelope.group_id ? py::object(py::str(*item.envelope.group_id)) : py::none();
  if (item.message) {
    d["kind"] = item.message->kind == client::MessageKind::kText ? "text" : "group-key";
    d["text"] = item.message->text;
    d["error"] = py::none();
  } else {
    d["kind"] = py::none();
    d["text"] = py::none();
    d["error"] = item.error ? py::object(py::str(std::string(Category(*item.error)))) : py::none();
    d["detail"] = item.detail;
  }
  return d;
}

// Network and client bundled so Python never holds a client whose network has
// been collected.
class PyClient {
 public:
  PyClient(std::shared_ptr<client::Network> net, client::Client c)
      : net_(std::move(net)), client_(std::make_unique<client::Client>(std::move(c))) {}

  client::Client& get() { return *client_; }
  std::shared_ptr<client::Network> network() const { return net_; }

 private:
  std::shared_ptr<client::Network> net_;
  std::unique_ptr<client::Client> client_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ledgerchat native core";

  static py::exception<Error> error_type(m, "LedgerchatError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = py::reinterpret_borrow<py::object>(error_type.ptr());
      py::object exc = type(py::str(e.what()));
      exc.attr("category") = py::str(std::string(e.category()));
      exc.attr("exit_status") = ExitStatus(e.code());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  // --- primitives -----------------------------------------------------------------
  m.def("sha256", [](const py::bytes& d) { return ToPy(crypto::Sha256(FromPy(d))); });
  m.def("hmac_sha256", [](const py::bytes& key, const py::bytes& data) {
    return ToPy(crypto::HmacSha256(FromPy(key), FromPy(data)));
  });
  m.def("hkdf", [](const py::bytes& ikm, const py::bytes& salt, const py::bytes& info,
                   std::size_t length) {
    return ToPy(crypto::Hkdf(FromPy(ikm), FromPy(salt), FromPy(info), length));
  }, py::arg("ikm"), py::arg("salt"), py::arg("info"), py::arg("length"));
  m.def("pbkdf2_hmac_sha256", [](const py::bytes& password, const py::bytes& salt,
                                 std::uint32_t iterations, std::size_t length) {
    return ToPy(crypto::Pbkdf2HmacSha256(FromPy(password), FromPy(salt), iterations, length));
  }, py::arg("password"), py::arg("salt"), py::arg("iterations"), py::arg("length") = 32);
  m.def("aes_cbc_encrypt_blocks", [](const py::bytes& key, const py::bytes& iv, const py::bytes& data) {
    return ToPy(crypto::AesCbcEncryptBlocks(FromPy(key), FromPy(iv), FromPy(data)));
  });
  m.def("aes_cbc_decrypt_blocks", [](const py::bytes& key, const py::bytes& iv, const py::bytes& data) {
    return ToPy(crypto::AesCbcDecryptBlocks(FromPy(key), FromPy(iv), FromPy(data)));
  });

  // --- identity and ratchet -------------------------------------------------------
  m.def("generate_identity", [] {
    auto kp = crypto::GenerateIdentityKeyPair(crypto::DefaultEntropy());
    return py::make_tuple(ToPy(kp.private_key), ToPy(kp.public_key));
  }, "Fresh X25519 identity as (private_key, public_key).");
  m.def("identity_from_private", [](const py::bytes& priv) {
    auto kp = crypto::IdentityFromPrivate(ArrayFromPy<32>(priv, "private key"));
    return py::make_tuple(ToPy(kp.private_key), ToPy(kp.public_key));
  });
  m.def("derive_master_secret", [](const py::bytes& own_private, const py::bytes& peer_public) {
    return ToPy(crypto::DeriveMasterSecret(ArrayFromPy<32>(own_private, "private key"),
                                           ArrayFromPy<32>(peer_public, "public key"))
                    .bytes);
  });

  py::class_<crypto::MessageKey>(m, "MessageKey")
      .def(py::init([](const py::bytes& c, const py::bytes& mac, const py::bytes& iv,
                       std::uint64_t index) {
             crypto::MessageKey k;
             k.cipher_key = ArrayFromPy<32>(c, "cipher key");
             k.mac_key = ArrayFromPy<32>(mac, "mac key");
             k.iv = ArrayFromPy<16>(iv, "iv");
             k.index = index;
             return k;
           }),
           py::arg("cipher_key"), py::arg("mac_key"), py::arg("iv"), py::arg("index") = 0)
      .def_property_readonly("cipher_key", [](const crypto::MessageKey& k) { return ToPy(k.cipher_key); })
      .def_property_readonly("mac_key", [](const crypto::MessageKey& k) { return ToPy(k.mac_key); })
      .def_property_readonly("iv", [](const crypto::MessageKey& k) { return ToPy(k.iv); })
      .def_readonly("index", &crypto::MessageKey::index)
      .def(py::self == py::self);

  py::class_<crypto::ChainKey>(m, "ChainKey")
      .def_property_readonly("key", [](const crypto::ChainKey& k) { return ToPy(k.key); })
      .def_readonly("index", &crypto::ChainKey::index)
      .def(py::self == py::self);

  m.def("init_chains", [](const py::bytes& master, const std::string& self_id,
                          const std::string& peer_id) {
    crypto::MasterSecret ms{ArrayFromPy<32>(master, "master secret")};
    auto pair = crypto::InitChains(ms, self_id, peer_id);
    return py::make_tuple(pair.send, pair.receive);
  }, "Returns (send_chain, receive_chain).");
  m.def("ratchet_forward", [](const crypto::ChainKey& chain) {
    auto step = crypto::RatchetForward(chain);
    return py::make_tuple(step.message_key, step.next);
  }, "Returns (message_key, next_chain).");
  m.def("expand_message_key", [](const py::bytes& ikm, const std::string& info) {
    return crypto::ExpandMessageKey(FromPy(ikm), info);
  });

  m.def("seal", [](const crypto::MessageKey& k, const py::bytes& plaintext, const py::bytes& ad) {
    auto p = crypto::Seal(k, FromPy(plaintext), FromPy(ad));
    return py::make_tuple(ToPy(p.ciphertext), ToPy(p.mac));
  }, py::arg("key"), py::arg("plaintext"), py::arg("associated_data") = py::bytes(),
     "Encrypt-then-MAC; returns (ciphertext, mac).");
  m.def("unseal", [](const crypto::MessageKey& k, const py::bytes& ct, const py::bytes& mac,
                     const py::bytes& ad) {
    crypto::SealedPayload p{FromPy(ct), ArrayFromPy<32>(mac, "mac")};
    return ToPy(crypto::Unseal(k, p, FromPy(ad)));
  }, py::arg("key"), py::arg("ciphertext"), py::arg("mac"),
     py::arg("associated_data") = py::bytes());

  // --- chain ----------------------------------------------------------------------
  m.def("verify_chain_file", [](const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
    Bytes bytes(std::istreambuf_iterator<char>(in), {});
    auto report = pki::VerifyChainBytes(bytes);
    py::dict d;
    d["ok"] = report.ok;
    d["failed_height"] = report.failed_height ? py::object(py::int_(*report.failed_height)) : py::none();
    d["diagnostic"] = report.diagnostic;
    return d;
  });

  // --- benchmark ------------------------------------------------------------------
  m.def("generate_input", &harness::GenerateInput, py::arg("length"),
        py::arg("seed") = harness::kDefaultSeed);
  m.def("length_range", &harness::LengthRange, py::arg("max_length"),
        py::arg("step") = harness::kDefaultStep);
  m.def("bench_encrypt", [](std::vector<std::size_t> lengths, int repetitions, std::uint64_t seed) {
    harness::BenchOptions o{std::move(lengths), repetitions, seed, false};
    py::list out;
    for (const auto& r : harness::BenchEncrypt(o)) out.append(RecordToDict(r));
    return out;
  }, py::arg("lengths"), py::arg("repetitions") = harness::kDefaultRepetitions,
     py::arg("seed") = harness::kDefaultSeed);
  m.def("bench_decrypt", [](std::vector<std::size_t> lengths, int repetitions, std::uint64_t seed,
                            bool include_tampered) {
    harness::BenchOptions o{std::move(lengths), repetitions, seed, include_tampered};
    auto run = harness::BenchDecrypt(o);
    py::list records, failures;
    for (const auto& r : run.records) records.append(RecordToDict(r));
    for (const auto& f : run.failures) failures.append(py::make_tuple(f.input_length, f.category));
    py::dict d;
    d["records"] = records;
    d["failures"] = failures;
    d["accepted_forgeries"] = run.accepted_forgeries;
    return d;
  }, py::arg("lengths"), py::arg("repetitions") = harness::kDefaultRepetitions,
     py::arg("seed") = harness::kDefaultSeed, py::arg("include_tampered") = false);
  m.def("fit_line", [](const std::vector<double>& xs, const std::vector<double>& ys) {
    auto f = harness::FitLine(xs, ys);
    return py::make_tuple(f.slope, f.intercept, f.r_squared);
  }, "Least squares; returns (slope, intercept, r_squared).");

  // --- stack and clients ----------------------------------------------------------
  py::class_<harness::Stack>(m, "Stack")
      .def(py::init([](const std::filesystem::path& chain_file,
                       const std::filesystem::path& state_dir, std::uint16_t chain_port,
                       std::uint16_t mno_port, std::uint16_t relay_port,
                       std::int64_t snapshot_refresh_seconds) {
             harness::StackConfig c;
             c.chain_file = chain_file;
             c.state_dir = state_dir;
             c.chain_port = chain_port;
             c.mno_port = mno_port;
             c.relay_port = relay_port;
             c.snapshot_refresh_seconds = snapshot_refresh_seconds;
             return std::make_unique<harness::Stack>(c);
           }),
           py::arg("chain_file"), py::arg("state_dir"), py::arg("chain_port") = 0,
           py::arg("mno_port") = 0, py::arg("relay_port") = 0,
           py::arg("snapshot_refresh_seconds") = 0)
      .def("up", &harness::Stack::Up, py::call_guard<py::gil_scoped_release>())
      .def("down", &harness::Stack::Down, py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("is_up", &harness::Stack::up)
      .def_property_readonly("ports", [](const harness::Stack& s) {
        py::dict d;
        d["chain"] = s.chain_endpoint().port;
        d["mno"] = s.mno_endpoint().port;
        d["relay"] = s.relay_endpoint().port;
        return d;
      })
      .def("health", &harness::Stack::Health, py::call_guard<py::gil_scoped_release>())
      .def("chain_height", [](harness::Stack& s) { return s.chain().Snapshot().height(); });

  py::class_<client::Network, std::shared_ptr<client::Network>>(m, "Network");
  py::class_<wire::RemoteNetwork, client::Network, std::shared_ptr<wire::RemoteNetwork>>(
      m, "RemoteNetwork")
      .def(py::init([](std::uint16_t mno_port, std::uint16_t relay_port, const std::string& host) {
             return std::make_shared<wire::RemoteNetwork>(wire::Endpoint{host, mno_port},
                                                          wire::Endpoint{host, relay_port},
                                                          SystemClock());
           }),
           py::arg("mno_port"), py::arg("relay_port"), py::arg("host") = "127.0.0.1")
      .def("revoke", &wire::RemoteNetwork::Revoke, py::call_guard<py::gil_scoped_release>())
      .def("certificate_status", [](wire::RemoteNetwork& n, const std::string& user) {
        return std::string(pki::StatusName(n.FetchCertificate(user)));
      });

  py::class_<PyClient>(m, "Client")
      .def_static("install", [](std::shared_ptr<client::Network> net, const std::string& user) {
        return PyClient(net, client::Client::Install(user, *net));
      }, py::arg("network"), py::arg("user_id"))
      .def_static("restore", [](std::shared_ptr<client::Network> net, const py::bytes& archive,
                                const std::string& secret) {
        auto state = client::RestoreBackup(client::ParseBackupArchive(FromPy(archive)), secret);
        return PyClient(net, client::Client(std::move(state), *net));
      }, py::arg("network"), py::arg("archive"), py::arg("secret"))
      .def_property_readonly("user_id", [](PyClient& c) { return c.get().user_id(); })
      .def_property_readonly("fingerprint", [](PyClient& c) {
        return ToHex(pki::Fingerprint(c.get().state().certificate));
      })
      .def("start_session", [](PyClient& c, const std::string& peer) { c.get().StartSession(peer); })
      .def("has_session", [](PyClient& c, const std::string& peer) { return c.get().HasSession(peer); })
      .def("send_text", [](PyClient& c, const std::string& peer, const std::string& text) {
        return c.get().SendText(peer, text).counter;
      }, "Returns the message counter used.")
      .def("poll", [](PyClient& c) {
        py::list out;
        for (const auto& item : c.get().Poll()) out.append(PollItemToDict(item));
        return out;
      })
      .def("create_group", [](PyClient& c, const std::string& group,
                              const std::vector<std::string>& members) {
        return c.get().CreateGroup(group, members).excluded;
      }, "Returns {member: reason} for members left out.")
      .def("send_group", [](PyClient& c, const std::string& group, const std::string& text) {
        auto [env, acks] = c.get().SendGroupMessage(group, text);
        std::map<std::string, std::string> out;
        for (const auto& a : acks) {
          out[a.member_id] = a.ack ? "ok" : std::string(Category(a.error.value_or(ErrorCode::kRouting)));
        }
        return out;
      })
      .def("export_backup", [](PyClient& c, const std::string& secret, std::uint32_t iterations) {
        return ToPy(client::Serialize(c.get().ExportBackup(secret, iterations)));
      }, py::arg("secret"), py::arg("iterations") = crypto::kDefaultBackupIterations)
      .def("state_bytes", [](PyClient& c) { return ToPy(client::SerializeForBackup(c.get().state())); },
           "Canonical serialization of the full client state (includes private keys).");

  m.attr("BACKUP_MAGIC") = std::string(client::kBackupMagic);
  m.attr("MIN_BACKUP_ITERATIONS") = crypto::kMinBackupIterations;
}
