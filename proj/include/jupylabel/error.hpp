/*
 * Copyright 2026 The JupyLabel Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace jupylabel {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define JUPYLABEL_DEFINE_ERROR(Name)                                                               \
    class Name : public Error {                                                                    \
    public:                                                                                        \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}                       \
    }

// I/O
JUPYLABEL_DEFINE_ERROR(IoError);

// notebook_core
JUPYLABEL_DEFINE_ERROR(MalformedJson);
JUPYLABEL_DEFINE_ERROR(UnsupportedFormat);
JUPYLABEL_DEFINE_ERROR(SchemaViolation);

// vectorizer
JUPYLABEL_DEFINE_ERROR(EmptyCorpus);
JUPYLABEL_DEFINE_ERROR(EmptyVocabulary);

// gbdt / model artifact
JUPYLABEL_DEFINE_ERROR(SingleClass);
JUPYLABEL_DEFINE_ERROR(DimensionMismatch);
JUPYLABEL_DEFINE_ERROR(InvalidHyperparams);
JUPYLABEL_DEFINE_ERROR(ArtifactVersionMismatch);
JUPYLABEL_DEFINE_ERROR(ArtifactFormat);

// pipeline
JUPYLABEL_DEFINE_ERROR(TableMismatch);
JUPYLABEL_DEFINE_ERROR(IncompleteModelSet);

// evalkit
JUPYLABEL_DEFINE_ERROR(DegenerateSplit);
JUPYLABEL_DEFINE_ERROR(LengthMismatch);
JUPYLABEL_DEFINE_ERROR(DatasetFormat);

#undef JUPYLABEL_DEFINE_ERROR

}  // namespace jupylabel
