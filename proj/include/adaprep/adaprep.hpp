#pragma once

#include "adaprep/analyzer.hpp"
#include "adaprep/bench.hpp"
#include "adaprep/codec.hpp"
#include "adaprep/config.hpp"
#include "adaprep/corpus.hpp"
#include "adaprep/corpus_io.hpp"
#include "adaprep/cropper.hpp"
#include "adaprep/errors.hpp"
#include "adaprep/image.hpp"
#include "adaprep/pipeline.hpp"
#include "adaprep/policy.hpp"
#include "adaprep/quality.hpp"
#include "adaprep/tokens.hpp"
#include "adaprep/version.hpp"
