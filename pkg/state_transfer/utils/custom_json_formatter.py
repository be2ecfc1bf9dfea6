from pythonjsonlogger.jsonlogger import JsonFormatter

RENAMED_FIELDS = {'asctime': 'timestamp', 'levelname': 'level', 'name': 'error_type'}
FIELD_ORDER = ['error_id', 'error_type', 'level', 'timestamp', 'command_info', 'message', 'traceback']


class CustomJsonFormatter(JsonFormatter):
    """
    Error records keyed by error id, with the logger name reported as the
    error type (computation, configuration, output) and a fixed field order.
    """
    def add_fields(self, log_record, record, message_dict):
        super().add_fields(log_record, record, message_dict)
        log_record.setdefault('name', record.name)

    def process_log_record(self, log_record):
        for source_field, target_field in RENAMED_FIELDS.items():
            if source_field in log_record:
                log_record[target_field] = log_record.pop(source_field)

        # Empty command_info / traceback are dropped from the record
        ordered_record = {
            key: log_record[key] for key in FIELD_ORDER
            if key in log_record and log_record[key] not in ({}, [], None)
        }

        return super().process_log_record(ordered_record)
