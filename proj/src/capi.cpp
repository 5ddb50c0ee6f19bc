#include "phibvp/phibvp.h"

#include <algorithm>
#include <cstring>
#include <new>

#include "driver.hpp"

struct phibvp_problem {
    phibvp::LoadedProblem loaded;
};

struct phibvp_result {
    phibvp::RunOutput output;
};

namespace {

void write_err(char* errbuf, size_t errlen, const char* msg) {
    if (!errbuf || errlen == 0) return;
    std::strncpy(errbuf, msg, errlen - 1);
    errbuf[errlen - 1] = '\0';
}

template <typename Loader>
phibvp_problem* load_guarded(Loader&& loader, char* errbuf, size_t errlen) {
    try {
        auto* p = new phibvp_problem{loader()};
        return p;
    } catch (const std::exception& e) {
        write_err(errbuf, errlen, e.what());
        return nullptr;
    } catch (...) {
        write_err(errbuf, errlen, "unknown error");
        return nullptr;
    }
}

}  // namespace

extern "C" {

phibvp_problem* phibvp_problem_load(const char* path, char* errbuf, size_t errlen) {
    if (!path) {
        write_err(errbuf, errlen, "path is NULL");
        return nullptr;
    }
    return load_guarded([&] { return phibvp::load_problem_file(path); }, errbuf, errlen);
}

phibvp_problem* phibvp_problem_parse(const char* text, char* errbuf, size_t errlen) {
    if (!text) {
        write_err(errbuf, errlen, "text is NULL");
        return nullptr;
    }
    return load_guarded([&] { return phibvp::load_problem_text(text); }, errbuf, errlen);
}

void phibvp_problem_free(phibvp_problem* p) { delete p; }

phibvp_status phibvp_run(const phibvp_problem* p, const char* command, phibvp_result** out) {
    if (out) *out = nullptr;
    if (!p || !command || !out) return PHIBVP_ERROR;
    try {
        auto* r = new phibvp_result{phibvp::run_command(p->loaded, command)};
        *out = r;
        return static_cast<phibvp_status>(r->output.status);
    } catch (const std::exception& e) {
        auto* r = new (std::nothrow) phibvp_result{};
        if (r) {
            r->output.status = phibvp::RunStatus::UsageError;
            r->output.message = e.what();
            *out = r;
        }
        return PHIBVP_ERROR;
    }
}

phibvp_status phibvp_result_status(const phibvp_result* r) {
    return r ? static_cast<phibvp_status>(r->output.status) : PHIBVP_ERROR;
}

const char* phibvp_result_message(const phibvp_result* r) {
    return r ? r->output.message.c_str() : "";
}

const char* phibvp_result_report_json(const phibvp_result* r) {
    return r ? r->output.report_json.c_str() : "";
}

const char* phibvp_result_solution_csv(const phibvp_result* r) {
    return r ? r->output.solution_csv.c_str() : "";
}

const char* phibvp_result_profile_csv(const phibvp_result* r) {
    return r ? r->output.profile_csv.c_str() : "";
}

int phibvp_result_converged(const phibvp_result* r) {
    return r && r->output.converged ? 1 : 0;
}

size_t phibvp_result_num_nodes(const phibvp_result* r) {
    return r ? r->output.t_nodes.size() : 0;
}

size_t phibvp_result_nodes(const phibvp_result* r, double* t, double* x, size_t cap) {
    if (!r) return 0;
    const size_t n = std::min(cap, r->output.t_nodes.size());
    for (size_t i = 0; i < n; ++i) {
        if (t) t[i] = r->output.t_nodes[i];
        if (x) x[i] = r->output.x_nodes[i];
    }
    return n;
}

void phibvp_result_free(phibvp_result* r) { delete r; }

const char* phibvp_version(void) { return "0.1.0"; }

}  // extern "C"
