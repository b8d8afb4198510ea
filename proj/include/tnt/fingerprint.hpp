#pragma once

#include "tnt/model.hpp"

namespace tnt {

int infer_initial_ttl(int received_ttl);
int path_len(int received_ttl);
RouterSignature signature(int ttl_te, int ttl_er);

}  // namespace tnt
