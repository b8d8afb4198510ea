#include "tnt/fingerprint.hpp"

namespace tnt {

int infer_initial_ttl(int received_ttl) {
    if (received_ttl <= 64) return 64;
    if (received_ttl <= 128) return 128;
    return 255;
}

int path_len(int received_ttl) { return infer_initial_ttl(received_ttl) - received_ttl + 1; }

RouterSignature signature(int ttl_te, int ttl_er) {
    RouterSignature s{infer_initial_ttl(ttl_te), infer_initial_ttl(ttl_er), Brand::Unknown};
    if (s.te_initial_ttl == 255 && s.er_initial_ttl == 255)
        s.brand = Brand::CiscoLike;
    else if (s.te_initial_ttl == 255 && s.er_initial_ttl == 64)
        s.brand = Brand::JuniperJunOS;
    else if (s.te_initial_ttl == 128 && s.er_initial_ttl == 128)
        s.brand = Brand::JuniperJunosE;
    else if (s.te_initial_ttl == 64 && s.er_initial_ttl == 64)
        s.brand = Brand::UnixLike;
    return s;
}

}  // namespace tnt
