#include <cstdarg>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <new>

enum class MvfCase {
  Auto = 0,
  I = 1,
  II = 2,
};

enum class MvfStatus {
  Ok = 0,
  NullPointer = 1,
  InvalidUtf8 = 2,
  ParseError = 3,
  BadArgument = 4,
  Internal = 5,
};

/// Opaque handle; only ever seen behind a pointer.
struct MvfCertificate;

extern "C" {

/// Message for the last failing call on this thread, or NULL. Valid until the next call.
const char *mvf_last_error();

/// Run the pipeline on a comma-separated tangle list.
///
/// `q_auto` nonzero ignores `q`. On success `*out` receives a handle owned by the caller.
///
/// # Safety
/// `tangles` must be a NUL-terminated string and `out` a valid pointer.
MvfStatus mvf_certify(const char *tangles,
                      int64_t q,
                      int32_t q_auto,
                      MvfCase case_,
                      int32_t two_component,
                      int32_t include_matrix,
                      MvfCertificate **out);

/// 0 certified, 2 structurally unmatched, 3 a condition failed; -1 for NULL.
///
/// # Safety
/// `cert` must be NULL or a live handle from `mvf_certify`.
int32_t mvf_certificate_exit_code(const MvfCertificate *cert);

/// Pretty JSON of the certificate, borrowed from the handle.
///
/// # Safety
/// `cert` must be NULL or a live handle; the string dies with the handle.
const char *mvf_certificate_json(const MvfCertificate *cert);

/// # Safety
/// `cert` must be NULL or a handle from `mvf_certify` not yet freed.
void mvf_certificate_free(MvfCertificate *cert);

uint32_t mvf_cert_version();

} // extern "C"
