void rename_session(struct session *s, const char *new_name)
{
    char *alias = s->name;
    free(s->name);
    s->name = strdup(new_name);
    printf("renamed to %s\n", s->name);
}
